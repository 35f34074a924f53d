use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::parse::parse_feedback;
use super::prompts::{
    render_template, PromptBundle, BIAS_PREAMBLE, FEEDBACK_REQUEST_TEMPLATE, FEEDBACK_SYSTEM_TEMPLATE,
    REASK_INSTRUCTION,
};
use super::AgentError;
use crate::knowledge::{search_top_k, RetrievalResult, VectorIndex};
use crate::providers::{defaults, ChatMessage, Provider, FEEDBACK_MODE_MARKER};
use crate::session::{Scenario, Turn, TurnRole};
use crate::Scalar;

/// Analysis axes named in the feedback instructions, besides turn-taking.
pub const FEEDBACK_DIMENSIONS: [&str; 3] = ["tone", "engagement", "alternative phrasing"];

/// Longest retrieval query built from the user's turns, in characters.
pub const FEEDBACK_QUERY_MAX_CHARS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeedbackSection {
    OverallStyle,
    Strengths,
    Improvements,
    Recommendations,
}

impl FeedbackSection {
    pub const ALL: [FeedbackSection; 4] = [
        FeedbackSection::OverallStyle,
        FeedbackSection::Strengths,
        FeedbackSection::Improvements,
        FeedbackSection::Recommendations,
    ];

    pub fn title(self) -> &'static str {
        match self {
            FeedbackSection::OverallStyle => "Overall Communication Style",
            FeedbackSection::Strengths => "Key Strengths",
            FeedbackSection::Improvements => "Areas for Improvement",
            FeedbackSection::Recommendations => "Actionable Recommendations",
        }
    }

    /// The exact Markdown header, e.g. `## Key Strengths`.
    pub fn header(self) -> String {
        format!("## {}", self.title())
    }

    /// Stable slug used as the HTML section id.
    pub fn slug(self) -> &'static str {
        match self {
            FeedbackSection::OverallStyle => "overall-style",
            FeedbackSection::Strengths => "strengths",
            FeedbackSection::Improvements => "improvements",
            FeedbackSection::Recommendations => "recommendations",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackReport {
    pub overall_style: String,
    pub strengths: Vec<String>,
    pub improvements: Vec<String>,
    pub recommendations: Vec<String>,
    pub grounding: Vec<RetrievalResult>,
    pub generated_at: DateTime<Utc>,
}

impl FeedbackReport {
    pub fn list(&self, section: FeedbackSection) -> Option<&[String]> {
        match section {
            FeedbackSection::OverallStyle => None,
            FeedbackSection::Strengths => Some(&self.strengths),
            FeedbackSection::Improvements => Some(&self.improvements),
            FeedbackSection::Recommendations => Some(&self.recommendations),
        }
    }

    /// The four sections in canonical Markdown. Parses back to the same content.
    pub fn to_markdown(&self) -> String {
        let mut out = format!("{}\n{}\n", FeedbackSection::OverallStyle.header(), self.overall_style);
        for section in &FeedbackSection::ALL[1..] {
            out.push('\n');
            out.push_str(&section.header());
            out.push('\n');
            for item in self.list(*section).unwrap_or_default() {
                out.push_str("- ");
                out.push_str(item);
                out.push('\n');
            }
        }
        out
    }
}

/// Retrieval query for the feedback agent: the user's turns, newline-joined,
/// cut to the most recent [`FEEDBACK_QUERY_MAX_CHARS`] characters on a turn
/// boundary. A single latest turn longer than the limit is cut mid-turn.
pub fn build_feedback_query(history: &[Turn]) -> Result<String, AgentError> {
    let user_turns: Vec<&str> = history
        .iter()
        .filter(|t| t.role == TurnRole::User)
        .map(|t| t.text.as_str())
        .collect();
    let Some(latest) = user_turns.last() else {
        return Err(AgentError::NoUserTurns);
    };
    let mut picked: Vec<&str> = Vec::new();
    let mut len = 0;
    for text in user_turns.iter().rev() {
        let add = text.chars().count() + usize::from(!picked.is_empty());
        if len + add > FEEDBACK_QUERY_MAX_CHARS {
            break;
        }
        picked.push(text);
        len += add;
    }
    if picked.is_empty() {
        let skip = latest.chars().count() - FEEDBACK_QUERY_MAX_CHARS;
        return Ok(latest.chars().skip(skip).collect());
    }
    picked.reverse();
    Ok(picked.join("\n"))
}

/// Full transcript, one `User:` or `Partner:` line per turn.
pub fn format_transcript(history: &[Turn]) -> String {
    history
        .iter()
        .map(|t| match t.role {
            TurnRole::User => format!("User: {}", t.text),
            TurnRole::Agent => format!("Partner: {}", t.text),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn format_guidance(grounding: &[RetrievalResult]) -> String {
    if grounding.is_empty() {
        return "(no guidance excerpts are available; base the feedback on the transcript alone)".into();
    }
    grounding
        .iter()
        .enumerate()
        .map(|(i, r)| format!("[{}] (source {}, similarity {:.3})\n{}", i + 1, r.chunk_id, r.score, r.chunk_text))
        .collect::<Vec<_>>()
        .join("\n\n")
}

/// Feedback prompt: marker, preamble and instructions as system text; the
/// scenario, retrieved guidance and transcript as the user message.
pub fn build_feedback_prompt(scenario: &Scenario, history: &[Turn], grounding: &[RetrievalResult]) -> PromptBundle {
    let system = format!(
        "{FEEDBACK_MODE_MARKER}\n{}\n\n{}",
        BIAS_PREAMBLE.trim_end(),
        FEEDBACK_SYSTEM_TEMPLATE.trim_end()
    );
    let guidance = format_guidance(grounding);
    let transcript = format_transcript(history);
    let request = render_template(
        FEEDBACK_REQUEST_TEMPLATE,
        &[
            ("scenario_title", scenario.title.as_str()),
            ("scenario_description", scenario.description.as_str()),
            ("guidance", guidance.as_str()),
            ("transcript", transcript.as_str()),
        ],
    );
    PromptBundle::new(system, vec![ChatMessage::user(request.trim_end())])
}

/// Retrieves guidance for the user's turns, asks the model for the four
/// feedback sections and parses them. A reply that does not parse is
/// re-asked once.
pub async fn generate_feedback<S, P>(
    scenario: &Scenario,
    history: &[Turn],
    index: &VectorIndex<S>,
    provider: &P,
    k: usize,
) -> Result<FeedbackReport, AgentError>
where
    S: Scalar,
    P: Provider + ?Sized,
{
    let query = build_feedback_query(history)?;
    let grounding = search_top_k(index, provider, &query, k).await?;
    let bundle = build_feedback_prompt(scenario, history, &grounding);
    let mut request = bundle.to_request(
        provider.chat_model(),
        defaults::FEEDBACK_TEMPERATURE,
        defaults::FEEDBACK_MAX_TOKENS,
    );
    let raw = provider.chat_complete(&request).await?;
    let mut report = match parse_feedback(&raw) {
        Ok(report) => report,
        Err(err) => {
            tracing::debug!(missing = ?err.missing, "feedback reply did not parse, re-asking");
            if !raw.trim().is_empty() {
                request.messages.push(ChatMessage::assistant(raw));
            }
            request.messages.push(ChatMessage::user(REASK_INSTRUCTION.trim_end()));
            let retry = provider.chat_complete(&request).await?;
            parse_feedback(&retry)?
        }
    };
    report.grounding = grounding;
    report.generated_at = Utc::now();
    Ok(report)
}
