use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use sw_core::agents::{parse_feedback, FeedbackSection};

use super::{ensure, mixed_text, rng, vocab_text};
use crate::Outcome;

const FUZZ_CASES: usize = 10_000;
const ROUND_TRIPS: usize = 2_000;

const JUNK: &[&str] = &[
    "## ", "##", "###", "# ", "- ", "* ", "+ ", "• ", "1. ", "12) ", "9999. ", "---", "***", "___", "\n", "\r\n", "\n\n",
    ":", "Overall Communication Style", "key strengths", "AREAS FOR IMPROVEMENT", "Actionable Recommendations:",
    "\u{0}", "\u{feff}", "\u{200b}", "😀", "ß", "\t", "  ", "-", "1.", "1)",
];

fn random_unicode(rng: &mut StdRng, len: usize) -> String {
    (0..len)
        .map(|_| loop {
            if let Some(c) = char::from_u32(rng.gen_range(0..0x11_0000)) {
                break c;
            }
        })
        .collect()
}

fn structured_junk(rng: &mut StdRng) -> String {
    let mut out = String::new();
    for _ in 0..rng.gen_range(0..80) {
        match rng.gen_range(0..4) {
            0 => {
                let len = rng.gen_range(0..6);
                out.push_str(&random_unicode(rng, len));
            }
            1 => {
                let len = rng.gen_range(0..12);
                out.push_str(&mixed_text(rng, len));
            }
            _ => out.push_str(JUNK[rng.gen_range(0..JUNK.len())]),
        }
    }
    out
}

fn random_bytes_lossy(rng: &mut StdRng) -> String {
    let bytes: Vec<u8> = (0..rng.gen_range(0..400)).map(|_| rng.gen()).collect();
    String::from_utf8_lossy(&bytes).into_owned()
}

/// Every input either parses or yields a structured error; nothing panics.
fn fuzz(rng: &mut StdRng) -> Result<(usize, usize), String> {
    let (mut parsed, mut rejected) = (0, 0);
    for i in 0..FUZZ_CASES {
        let input = match i % 5 {
            0 => {
                let len = rng.gen_range(0..300);
                random_unicode(rng, len)
            }
            1 => random_bytes_lossy(rng),
            2 => structured_junk(rng),
            3 => mutated_report(rng),
            _ => {
                let mut s = structured_junk(rng);
                s.push_str(&"#".repeat(rng.gen_range(0..5000)));
                s.push_str(&"- ".repeat(rng.gen_range(0..2000)));
                s
            }
        };
        match catch_unwind(AssertUnwindSafe(|| parse_feedback(&input))) {
            Ok(Ok(report)) => {
                parsed += 1;
                let items = report.strengths.iter().chain(&report.improvements).chain(&report.recommendations);
                for item in items {
                    ensure(!item.is_empty() && item.trim() == item, || format!("case {i}: untrimmed item {item:?}"))?;
                }
            }
            Ok(Err(err)) => {
                rejected += 1;
                ensure(!err.missing.is_empty(), || format!("case {i}: error without missing sections"))?;
            }
            Err(_) => return Err(format!("case {i}: parser panicked on {input:?}")),
        }
    }
    ensure(parsed > 0 && rejected > 0, || format!("fuzz corpus one-sided: {parsed} parsed, {rejected} rejected"))?;
    Ok((parsed, rejected))
}

/// A well-formed report with lines dropped, duplicated or replaced by junk.
fn mutated_report(rng: &mut StdRng) -> String {
    let (text, _) = render(rng);
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    for _ in 0..rng.gen_range(0..4) {
        if lines.is_empty() {
            break;
        }
        let at = rng.gen_range(0..lines.len());
        match rng.gen_range(0..3) {
            0 => {
                lines.remove(at);
            }
            1 => {
                let copy = lines[at].clone();
                lines.insert(at, copy);
            }
            _ => lines[at] = structured_junk(rng),
        }
    }
    lines.join("\n")
}

struct Expected {
    overall: String,
    lists: [Vec<String>; 3],
}

fn random_case(rng: &mut StdRng, title: &str) -> String {
    title
        .chars()
        .map(|c| if rng.gen_bool(0.5) { c.to_ascii_uppercase() } else { c.to_ascii_lowercase() })
        .collect()
}

fn header_line(rng: &mut StdRng, section: FeedbackSection) -> String {
    let title = section.title();
    let title = match rng.gen_range(0..3) {
        0 => title.to_string(),
        1 => random_case(rng, title),
        _ => title.split(' ').collect::<Vec<_>>().join(["  ", "\t", " "][rng.gen_range(0..3)]),
    };
    let lead = [" ", "", "  "][rng.gen_range(0..3)];
    let gap = ["", " ", "   "][rng.gen_range(0..3)];
    let colon = if rng.gen_bool(0.3) { ":" } else { "" };
    format!("{lead}##{gap}{title}{colon}")
}

fn bullet(rng: &mut StdRng, n: usize) -> String {
    match rng.gen_range(0..6) {
        0 => "-".into(),
        1 => "*".into(),
        2 => "+".into(),
        3 => "•".into(),
        4 => format!("{}.", n + 1),
        _ => format!("{})", n + 1),
    }
}

/// Breaks `words` into lines of random width.
fn wrap(rng: &mut StdRng, words: &[&str]) -> Vec<String> {
    let mut lines = Vec::new();
    let mut rest = words;
    while !rest.is_empty() {
        let take = rng.gen_range(1..=rest.len());
        lines.push(rest[..take].join(" "));
        rest = &rest[take..];
    }
    lines
}

fn render(rng: &mut StdRng) -> (String, Expected) {
    let eol = if rng.gen_bool(0.2) { "\r\n" } else { "\n" };
    let mut out: Vec<String> = Vec::new();
    if rng.gen_bool(0.5) {
        out.push(format!("Here is your feedback: {}", vocab_text(rng, 4)));
        out.push(String::new());
    }

    let mut paragraphs = Vec::new();
    let mut style_lines = Vec::new();
    for p in 0..rng.gen_range(1..4) {
        let words = rng.gen_range(1..25);
        let text = vocab_text(rng, words);
        let words: Vec<&str> = text.split(' ').collect();
        if p > 0 {
            style_lines.push(if rng.gen_bool(0.2) { "---".to_string() } else { String::new() });
        }
        for line in wrap(rng, &words) {
            style_lines.push(format!("{}{line}{}", [" ", ""][rng.gen_range(0..2)], ["", "  "][rng.gen_range(0..2)]));
        }
        paragraphs.push(text);
    }

    let mut lists: [Vec<String>; 3] = Default::default();
    let mut list_lines: [Vec<String>; 3] = Default::default();
    for (slot, lines) in lists.iter_mut().zip(list_lines.iter_mut()) {
        for n in 0..rng.gen_range(1..7) {
            let words = rng.gen_range(1..15);
            let text = vocab_text(rng, words);
            let words: Vec<&str> = text.split(' ').collect();
            let wrapped = wrap(rng, &words);
            let indent = ["", " ", "  "][rng.gen_range(0..3)];
            lines.push(format!("{indent}{} {}", bullet(rng, n), wrapped[0]));
            for cont in &wrapped[1..] {
                lines.push(format!("   {cont}"));
            }
            if rng.gen_bool(0.2) {
                lines.push(String::new());
            }
            slot.push(text);
        }
    }

    let mut order = FeedbackSection::ALL;
    order.shuffle(rng);
    for section in order {
        out.push(header_line(rng, section));
        match section {
            FeedbackSection::OverallStyle => out.extend(style_lines.iter().cloned()),
            FeedbackSection::Strengths => out.extend(list_lines[0].iter().cloned()),
            FeedbackSection::Improvements => out.extend(list_lines[1].iter().cloned()),
            FeedbackSection::Recommendations => out.extend(list_lines[2].iter().cloned()),
        }
        if rng.gen_bool(0.5) {
            out.push(String::new());
        }
        if rng.gen_bool(0.15) {
            out.push("***".into());
        }
    }
    let text = out.join(eol);
    (text, Expected { overall: paragraphs.join("\n\n"), lists })
}

fn round_trips(rng: &mut StdRng) -> Result<(), String> {
    for i in 0..ROUND_TRIPS {
        let (text, want) = render(rng);
        let report = parse_feedback(&text).map_err(|e| format!("case {i}: rejected valid input ({e}):\n{text}"))?;
        ensure(report.overall_style == want.overall, || format!("case {i}: style {:?} != {:?}\n{text}", report.overall_style, want.overall))?;
        let got = [&report.strengths, &report.improvements, &report.recommendations];
        for (g, w) in got.iter().zip(&want.lists) {
            ensure(*g == w, || format!("case {i}: list {g:?} != {w:?}\n{text}"))?;
        }
        let canonical = parse_feedback(&report.to_markdown()).map_err(|e| format!("case {i}: canonical form rejected: {e}"))?;
        ensure(canonical.overall_style == report.overall_style && canonical.strengths == report.strengths, || {
            format!("case {i}: canonical Markdown does not round-trip")
        })?;
    }
    Ok(())
}

pub fn totality() -> Outcome {
    let mut rng = rng(6);
    let (parsed, rejected) = fuzz(&mut rng)?;
    round_trips(&mut rng)?;
    Ok(format!(
        "{FUZZ_CASES} fuzz inputs without a panic ({parsed} parsed, {rejected} rejected with missing sections); \
         {ROUND_TRIPS} permuted, mixed-case, wrapped reports recovered exactly"
    ))
}
