//! Parser for the four-section Markdown feedback format.
//!
//! Grammar: a line `## <title>` (case-insensitive, whitespace-normalized,
//! optional trailing colon) opens a section; sections may come in any order.
//! Text before the first header is ignored. The style section is free text.
//! List sections hold items introduced by `-`, `*`, `+` or `1.`/`1)`
//! bullets; a non-bullet line directly after an item continues it, any other
//! non-bullet line starts a new item.

use std::collections::BTreeMap;

use chrono::Utc;

use super::{FeedbackParseError, FeedbackReport, FeedbackSection};

fn header_of(line: &str) -> Option<FeedbackSection> {
    let rest = line.trim().strip_prefix("##")?;
    if rest.starts_with('#') {
        return None;
    }
    let name = rest.trim().trim_end_matches(':').split_whitespace().collect::<Vec<_>>().join(" ");
    FeedbackSection::ALL
        .into_iter()
        .find(|s| s.title().eq_ignore_ascii_case(&name))
}

/// Text after a list marker, if `line` starts with one.
fn bullet_body(line: &str) -> Option<&str> {
    let t = line.trim_start();
    if let Some(rest) = t.strip_prefix(['-', '*', '+', '•']) {
        if rest.is_empty() || rest.starts_with(char::is_whitespace) {
            return Some(rest.trim());
        }
        return None;
    }
    let digits = t.bytes().take_while(u8::is_ascii_digit).count();
    if digits == 0 || digits > 3 {
        return None;
    }
    let rest = t[digits..].strip_prefix(['.', ')'])?;
    if rest.is_empty() || rest.starts_with(char::is_whitespace) {
        Some(rest.trim())
    } else {
        None
    }
}

fn is_rule(line: &str) -> bool {
    let t = line.trim();
    t.len() >= 3 && (t.chars().all(|c| c == '-') || t.chars().all(|c| c == '*') || t.chars().all(|c| c == '_'))
}

fn parse_paragraphs(lines: &[&str]) -> String {
    let mut paragraphs: Vec<String> = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for line in lines {
        let t = line.trim();
        if t.is_empty() || is_rule(t) {
            if !current.is_empty() {
                paragraphs.push(current.join(" "));
                current.clear();
            }
        } else {
            current.push(t);
        }
    }
    if !current.is_empty() {
        paragraphs.push(current.join(" "));
    }
    paragraphs.join("\n\n")
}

fn parse_items(lines: &[&str]) -> Vec<String> {
    let mut items: Vec<String> = Vec::new();
    let mut continuing = false;
    for line in lines {
        let t = line.trim();
        if t.is_empty() || is_rule(t) {
            continuing = false;
            continue;
        }
        match bullet_body(t) {
            Some(body) => {
                items.push(body.to_string());
                continuing = true;
            }
            None if continuing => {
                let last = items.last_mut().expect("continuing implies an item");
                if !last.is_empty() {
                    last.push(' ');
                }
                last.push_str(t);
            }
            None => {
                items.push(t.to_string());
                continuing = true;
            }
        }
    }
    items.retain(|i| !i.is_empty());
    items
}

/// Parses model output into a report with empty grounding.
pub fn parse_feedback(raw: &str) -> Result<FeedbackReport, FeedbackParseError> {
    let mut sections: BTreeMap<FeedbackSection, Vec<&str>> = BTreeMap::new();
    let mut current: Option<FeedbackSection> = None;
    for line in raw.lines() {
        if let Some(section) = header_of(line) {
            sections.entry(section).or_default();
            current = Some(section);
        } else if let Some(section) = current {
            sections.entry(section).or_default().push(line);
        }
    }

    let overall_style = sections
        .get(&FeedbackSection::OverallStyle)
        .map(|l| parse_paragraphs(l))
        .unwrap_or_default();
    let list = |s: FeedbackSection| sections.get(&s).map(|l| parse_items(l)).unwrap_or_default();
    let strengths = list(FeedbackSection::Strengths);
    let improvements = list(FeedbackSection::Improvements);
    let recommendations = list(FeedbackSection::Recommendations);

    let missing: Vec<FeedbackSection> = FeedbackSection::ALL
        .into_iter()
        .filter(|s| match s {
            FeedbackSection::OverallStyle => overall_style.is_empty(),
            FeedbackSection::Strengths => strengths.is_empty(),
            FeedbackSection::Improvements => improvements.is_empty(),
            FeedbackSection::Recommendations => recommendations.is_empty(),
        })
        .collect();
    if !missing.is_empty() {
        return Err(FeedbackParseError { missing });
    }
    Ok(FeedbackReport {
        overall_style,
        strengths,
        improvements,
        recommendations,
        grounding: Vec::new(),
        generated_at: Utc::now(),
    })
}
