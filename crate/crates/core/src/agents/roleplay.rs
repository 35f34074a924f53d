use super::prompts::{render_template, PromptBundle, BIAS_PREAMBLE, ROLEPLAY_TEMPLATE};
use super::AgentError;
use crate::providers::{defaults, ChatMessage, Provider, ProviderError};
use crate::session::{Scenario, Session, Turn, TurnRole};

/// Number of most recent turns sent with each role-play request.
pub const DEFAULT_HISTORY_WINDOW: usize = 20;

fn roleplay_system(scenario: &Scenario) -> String {
    let persona = render_template(
        ROLEPLAY_TEMPLATE,
        &[
            ("agent_role", scenario.agent_role.as_str()),
            ("scenario_description", scenario.description.as_str()),
            ("scenario_title", scenario.title.as_str()),
        ],
    );
    format!("{}\n\n{}", BIAS_PREAMBLE.trim_end(), persona.trim_end())
}

fn to_message(turn: &Turn) -> ChatMessage {
    match turn.role {
        TurnRole::User => ChatMessage::user(turn.text.clone()),
        TurnRole::Agent => ChatMessage::assistant(turn.text.clone()),
    }
}

/// Prompt for the next partner reply: the last `window` turns of `history`
/// followed by `user_input`.
pub fn build_roleplay_prompt(
    scenario: &Scenario,
    history: &[Turn],
    user_input: &str,
    window: usize,
) -> Result<PromptBundle, AgentError> {
    if user_input.trim().is_empty() {
        return Err(AgentError::EmptyInput);
    }
    let recent = &history[history.len().saturating_sub(window)..];
    let mut messages: Vec<ChatMessage> = recent.iter().map(to_message).collect();
    messages.push(ChatMessage::user(user_input));
    Ok(PromptBundle::new(roleplay_system(scenario), messages))
}

/// One role-play exchange. On success the user turn and the partner reply
/// are appended together; on any error `session` is left untouched.
pub async fn converse<P: Provider + ?Sized>(
    session: &mut Session,
    user_input: &str,
    provider: &P,
) -> Result<String, AgentError> {
    let input = user_input.trim();
    let bundle = build_roleplay_prompt(&session.scenario, &session.turns, input, DEFAULT_HISTORY_WINDOW)?;
    let request = bundle.to_request(
        provider.chat_model(),
        defaults::ROLEPLAY_TEMPERATURE,
        defaults::ROLEPLAY_MAX_TOKENS,
    );
    let reply = provider.chat_complete(&request).await?;
    let reply = reply.trim();
    if reply.is_empty() {
        return Err(ProviderError::MalformedResponse("empty reply".into()).into());
    }
    session.turns.reserve(2);
    session.turns.push(Turn::user(input));
    session.turns.push(Turn::agent(reply));
    Ok(reply.to_string())
}
