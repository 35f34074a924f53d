//! Deterministic offline provider.
//!
//! Every operation is a pure function of its input:
//! chat echoes the last user message (or returns [`CANONICAL_FEEDBACK`] when
//! the system prompt carries [`FEEDBACK_MODE_MARKER`]), embeddings are token
//! hashes, transcription decodes the bytes as UTF-8 and synthesis encodes the
//! text as UTF-8 bytes tagged `audio/wav`.

use async_trait::async_trait;

use super::types::{validate_embed_input, validate_tts_input};
use super::{AudioPayload, ChatRequest, Provider, ProviderError, ProviderMode};
use crate::knowledge::stub_embed_text;
use crate::Embedding;

/// Token that switches the stub chat into feedback mode.
pub const FEEDBACK_MODE_MARKER: &str = "[FEEDBACK_MODE]";

pub const STUB_EMBED_DIM: usize = 64;

/// Well-formed four-section feedback returned by the stub in feedback mode.
pub const CANONICAL_FEEDBACK: &str = "\
## Overall Communication Style
You kept the exchange polite and on topic, and your requests were easy to follow. Your tone stayed friendly and you answered each question your partner asked.

## Key Strengths
- You greeted your partner before making a request.
- Your requests were specific and easy to act on.

## Areas for Improvement
- Ask a follow-up question to keep the conversation going.
- Acknowledge what your partner says before moving on to your next point.

## Actionable Recommendations
1. After the greeting, try adding \"How is your day going?\"
2. Instead of \"Give me a burger\", say \"Could I please have a burger?\"
3. If you did not catch something, say \"Sorry, could you repeat that?\"
";

/// Reply of the stub chat model to `request`.
pub fn stub_chat(request: &ChatRequest) -> String {
    if request
        .system_prompt()
        .is_some_and(|s| s.contains(FEEDBACK_MODE_MARKER))
    {
        return CANONICAL_FEEDBACK.to_string();
    }
    format!("You said: {}", request.last_user_message().unwrap_or_default())
}

#[derive(Debug, Clone)]
pub struct StubProvider {
    dim: usize,
}

impl Default for StubProvider {
    fn default() -> Self {
        Self { dim: STUB_EMBED_DIM }
    }
}

impl StubProvider {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_dim(dim: usize) -> Self {
        assert!(dim > 0, "embedding dimension must be positive");
        Self { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

#[async_trait]
impl Provider for StubProvider {
    fn mode(&self) -> ProviderMode {
        ProviderMode::Stub
    }

    fn chat_model(&self) -> &str {
        "stub-chat"
    }

    async fn chat_complete(&self, request: &ChatRequest) -> Result<String, ProviderError> {
        request.validate()?;
        Ok(stub_chat(request))
    }

    async fn embed(&self, texts: &[String]) -> Result<Vec<Embedding>, ProviderError> {
        validate_embed_input(texts)?;
        Ok(texts.iter().map(|t| stub_embed_text(t, self.dim)).collect())
    }

    async fn transcribe(&self, audio: AudioPayload) -> Result<String, ProviderError> {
        audio.validate()?;
        Ok(String::from_utf8(audio.bytes).unwrap_or_default())
    }

    async fn synthesize(&self, text: &str) -> Result<AudioPayload, ProviderError> {
        validate_tts_input(text)?;
        Ok(AudioPayload { bytes: text.as_bytes().to_vec(), media_type: "audio/wav".into() })
    }
}
