use thiserror::Error;

/// Failure talking to an upstream provider.
///
/// Messages never carry the API key or upstream response bodies.
#[derive(Debug, Error)]
pub enum ProviderError {
    #[error("invalid request: {0}")]
    InvalidRequest(String),

    #[error("provider rejected the credentials (HTTP {status})")]
    Auth { status: u16 },

    #[error("provider unavailable after {attempts} attempt(s): {reason}")]
    Unavailable { attempts: u32, reason: String },

    #[error("provider rejected the request (HTTP {status})")]
    Rejected { status: u16 },

    #[error("malformed provider response: {0}")]
    MalformedResponse(String),

    #[error("unsupported media type `{0}`")]
    UnsupportedMediaType(String),

    #[error("text is {len} characters, the limit is {max}")]
    TextTooLong { len: usize, max: usize },
}
