//! Upstream model services behind one trait.
//!
//! [`Provider`] covers the four capabilities the service needs: chat
//! completion, text embedding, transcription and speech synthesis.
//! [`OpenAiProvider`] talks to any OpenAI-compatible gateway over HTTP and
//! [`StubProvider`] is a pure, offline test double.

mod config;
mod error;
mod openai;
mod stub;
mod transport;
mod types;

use async_trait::async_trait;

pub use config::{ApiKey, ProviderConfig};
pub use error::ProviderError;
pub use openai::OpenAiProvider;
pub use stub::{stub_chat, StubProvider, CANONICAL_FEEDBACK, FEEDBACK_MODE_MARKER, STUB_EMBED_DIM};
pub use transport::{
    HttpRequest, HttpResponse, HttpTransport, MultipartFile, RequestBody, ReqwestTransport,
    TransportError,
};
pub use types::{
    defaults, AudioPayload, ChatMessage, ChatRequest, Role, ALLOWED_AUDIO_TYPES, MAX_TTS_CHARS,
};

use crate::Embedding;

/// Which backend a provider talks to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProviderMode {
    Live,
    Stub,
}

impl ProviderMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ProviderMode::Live => "live",
            ProviderMode::Stub => "stub",
        }
    }
}

impl std::str::FromStr for ProviderMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "live" => Ok(ProviderMode::Live),
            "stub" => Ok(ProviderMode::Stub),
            other => Err(format!("unknown provider mode `{other}` (expected live or stub)")),
        }
    }
}

/// Chat, embedding and speech capabilities of an upstream model service.
///
/// Implementations are immutable after construction and safe to share
/// between concurrent request handlers.
#[async_trait]
pub trait Provider: Send + Sync {
    fn mode(&self) -> ProviderMode;

    /// Model identifier placed into [`ChatRequest::model`].
    fn chat_model(&self) -> &str;

    /// Returns the content of the first choice's assistant message.
    async fn chat_complete(&self, request: &ChatRequest) -> Result<String, ProviderError>;

    /// One vector per input text, in input order, all of the same dimension.
    async fn embed(&self, texts: &[String]) -> Result<Vec<Embedding>, ProviderError>;

    /// Takes the payload by value; the bytes are dropped when the call returns.
    async fn transcribe(&self, audio: AudioPayload) -> Result<String, ProviderError>;

    async fn synthesize(&self, text: &str) -> Result<AudioPayload, ProviderError>;
}
