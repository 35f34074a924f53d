use serde::{Deserialize, Serialize};

use super::ProviderError;

/// Generation defaults per agent.
pub mod defaults {
    pub const ROLEPLAY_TEMPERATURE: f32 = 0.7;
    pub const FEEDBACK_TEMPERATURE: f32 = 0.2;
    pub const ROLEPLAY_MAX_TOKENS: u32 = 512;
    pub const FEEDBACK_MAX_TOKENS: u32 = 1024;
}

/// Longest input accepted by [`synthesize`](super::Provider::synthesize), in characters.
pub const MAX_TTS_CHARS: usize = 4096;

/// Media types accepted for transcription.
pub const ALLOWED_AUDIO_TYPES: &[&str] = &[
    "audio/wav",
    "audio/wave",
    "audio/x-wav",
    "audio/mpeg",
    "audio/mp3",
    "audio/mp4",
    "audio/m4a",
    "audio/x-m4a",
    "audio/webm",
    "audio/ogg",
    "audio/flac",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::System => "system",
            Role::User => "user",
            Role::Assistant => "assistant",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        Self { role: Role::System, content: content.into() }
    }

    pub fn user(content: impl Into<String>) -> Self {
        Self { role: Role::User, content: content.into() }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        Self { role: Role::Assistant, content: content.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
    pub temperature: f32,
    pub max_tokens: u32,
}

impl ChatRequest {
    /// Request with the role-play generation defaults.
    pub fn new(model: impl Into<String>, messages: Vec<ChatMessage>) -> Self {
        Self {
            model: model.into(),
            messages,
            temperature: defaults::ROLEPLAY_TEMPERATURE,
            max_tokens: defaults::ROLEPLAY_MAX_TOKENS,
        }
    }

    pub fn with_temperature(mut self, temperature: f32) -> Self {
        self.temperature = temperature;
        self
    }

    pub fn with_max_tokens(mut self, max_tokens: u32) -> Self {
        self.max_tokens = max_tokens;
        self
    }

    pub fn validate(&self) -> Result<(), ProviderError> {
        let invalid = |msg: &str| Err(ProviderError::InvalidRequest(msg.to_string()));
        if self.messages.is_empty() {
            return invalid("messages must not be empty");
        }
        if !(0.0..=2.0).contains(&self.temperature) {
            return invalid("temperature must be within [0, 2]");
        }
        if self.max_tokens == 0 {
            return invalid("max_tokens must be positive");
        }
        for (i, msg) in self.messages.iter().enumerate() {
            match msg.role {
                Role::System if i != 0 => {
                    return invalid("a system message may only appear at position 0")
                }
                Role::User | Role::Assistant if msg.content.trim().is_empty() => {
                    return invalid("user and assistant messages must not be empty")
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn system_prompt(&self) -> Option<&str> {
        self.messages
            .first()
            .filter(|m| m.role == Role::System)
            .map(|m| m.content.as_str())
    }

    pub fn last_user_message(&self) -> Option<&str> {
        self.messages
            .iter()
            .rev()
            .find(|m| m.role == Role::User)
            .map(|m| m.content.as_str())
    }
}

/// Audio bytes with their MIME type.
#[derive(Clone, PartialEq, Eq)]
pub struct AudioPayload {
    pub bytes: Vec<u8>,
    pub media_type: String,
}

impl std::fmt::Debug for AudioPayload {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AudioPayload")
            .field("len", &self.bytes.len())
            .field("media_type", &self.media_type)
            .finish()
    }
}

impl AudioPayload {
    /// Validates the payload; media type parameters such as `;codecs=opus`
    /// are stripped and the essence lowercased.
    pub fn new(bytes: Vec<u8>, media_type: &str) -> Result<Self, ProviderError> {
        let essence = media_type
            .split(';')
            .next()
            .unwrap_or_default()
            .trim()
            .to_ascii_lowercase();
        if !ALLOWED_AUDIO_TYPES.contains(&essence.as_str()) {
            return Err(ProviderError::UnsupportedMediaType(essence));
        }
        if bytes.is_empty() {
            return Err(ProviderError::InvalidRequest("audio payload is empty".into()));
        }
        Ok(Self { bytes, media_type: essence })
    }

    pub fn validate(&self) -> Result<(), ProviderError> {
        if !ALLOWED_AUDIO_TYPES.contains(&self.media_type.as_str()) {
            return Err(ProviderError::UnsupportedMediaType(self.media_type.clone()));
        }
        if self.bytes.is_empty() {
            return Err(ProviderError::InvalidRequest("audio payload is empty".into()));
        }
        Ok(())
    }

    /// File extension a transcription endpoint expects for this media type.
    pub fn file_extension(&self) -> &'static str {
        match self.media_type.as_str() {
            "audio/mpeg" | "audio/mp3" => "mp3",
            "audio/mp4" | "audio/m4a" | "audio/x-m4a" => "m4a",
            "audio/webm" => "webm",
            "audio/ogg" => "ogg",
            "audio/flac" => "flac",
            _ => "wav",
        }
    }
}

pub(crate) fn validate_embed_input(texts: &[String]) -> Result<(), ProviderError> {
    if texts.is_empty() {
        return Err(ProviderError::InvalidRequest("texts must not be empty".into()));
    }
    if texts.iter().any(|t| t.is_empty()) {
        return Err(ProviderError::InvalidRequest("texts must not contain empty strings".into()));
    }
    Ok(())
}

pub(crate) fn validate_tts_input(text: &str) -> Result<(), ProviderError> {
    if text.trim().is_empty() {
        return Err(ProviderError::InvalidRequest("text must not be empty".into()));
    }
    let len = text.chars().count();
    if len > MAX_TTS_CHARS {
        return Err(ProviderError::TextTooLong { len, max: MAX_TTS_CHARS });
    }
    Ok(())
}
