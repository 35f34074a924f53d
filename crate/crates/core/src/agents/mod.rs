//! The conversation partner and the feedback agent.
//!
//! Both agents are stateless: they read a scenario and a transcript, build a
//! [`PromptBundle`], call a [`Provider`](crate::providers::Provider) and
//! return text or a [`FeedbackReport`]. Session state is owned by the
//! caller.

mod error;
mod feedback;
mod html;
mod parse;
mod prompts;
mod roleplay;

pub use error::{AgentError, FeedbackParseError};
pub use feedback::{
    build_feedback_prompt, build_feedback_query, format_transcript, generate_feedback, FeedbackReport,
    FeedbackSection, FEEDBACK_DIMENSIONS, FEEDBACK_QUERY_MAX_CHARS,
};
pub use html::render_feedback_html;
pub use parse::parse_feedback;
pub use prompts::{
    render_template, PromptBundle, BIAS_PREAMBLE, FEEDBACK_REQUEST_TEMPLATE, FEEDBACK_SYSTEM_TEMPLATE,
    REASK_INSTRUCTION, ROLEPLAY_TEMPLATE,
};
pub use roleplay::{build_roleplay_prompt, converse, DEFAULT_HISTORY_WINDOW};
