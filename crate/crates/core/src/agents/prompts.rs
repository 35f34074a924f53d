//! Prompt assets and assembly.
//!
//! Templates are plain text under `assets/prompts/` with `{name}`
//! placeholders. Substitution is single-pass: placeholder-like text inside a
//! substituted value is never expanded again. Unknown placeholders are left
//! as written.

use crate::providers::{ChatMessage, ChatRequest, Role};

/// Chain-of-thought bias-mitigation instruction placed at the top of every
/// system prompt.
pub const BIAS_PREAMBLE: &str = include_str!("../../assets/prompts/bias_preamble.txt");

/// Role-play persona. Placeholders: `{agent_role}`, `{scenario_description}`.
pub const ROLEPLAY_TEMPLATE: &str = include_str!("../../assets/prompts/roleplay_system.txt");

/// Feedback agent instructions (system prompt, after the marker and preamble).
pub const FEEDBACK_SYSTEM_TEMPLATE: &str = include_str!("../../assets/prompts/feedback_system.txt");

/// Feedback request. Placeholders: `{scenario_title}`,
/// `{scenario_description}`, `{guidance}`, `{transcript}`.
pub const FEEDBACK_REQUEST_TEMPLATE: &str = include_str!("../../assets/prompts/feedback_request.txt");

/// Appended when the feedback reply does not parse.
pub const REASK_INSTRUCTION: &str = include_str!("../../assets/prompts/reask.txt");

pub fn render_template(template: &str, vars: &[(&str, &str)]) -> String {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let replaced = after.find('}').and_then(|close| {
            let name = &after[..close];
            vars.iter()
                .find(|(k, _)| *k == name)
                .map(|(_, v)| (close, *v))
        });
        match replaced {
            Some((close, value)) => {
                out.push_str(value);
                rest = &after[close + 1..];
            }
            None => {
                out.push('{');
                rest = after;
            }
        }
    }
    out.push_str(rest);
    out
}

/// System text plus the ordered conversation sent to the chat model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptBundle {
    pub system: String,
    pub messages: Vec<ChatMessage>,
}

impl PromptBundle {
    /// Builds a bundle, merging adjacent messages of the same role so roles
    /// alternate.
    pub(crate) fn new(system: String, messages: Vec<ChatMessage>) -> Self {
        let mut merged: Vec<ChatMessage> = Vec::with_capacity(messages.len());
        for msg in messages {
            match merged.last_mut() {
                Some(prev) if prev.role == msg.role => {
                    prev.content.push('\n');
                    prev.content.push_str(&msg.content);
                }
                _ => merged.push(msg),
            }
        }
        Self { system, messages: merged }
    }

    pub fn to_request(&self, model: &str, temperature: f32, max_tokens: u32) -> ChatRequest {
        let mut messages = Vec::with_capacity(self.messages.len() + 1);
        messages.push(ChatMessage::system(self.system.clone()));
        messages.extend(self.messages.iter().cloned());
        ChatRequest::new(model, messages)
            .with_temperature(temperature)
            .with_max_tokens(max_tokens)
    }

    /// Every message, system first, as one string.
    pub fn full_text(&self) -> String {
        let mut text = self.system.clone();
        for m in &self.messages {
            text.push('\n');
            text.push_str(&m.content);
        }
        text
    }

    pub fn last_role(&self) -> Option<Role> {
        self.messages.last().map(|m| m.role)
    }
}
