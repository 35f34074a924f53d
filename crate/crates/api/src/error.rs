use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use serde::{Deserialize, Serialize};
use sw_core::agents::AgentError;
use sw_core::knowledge::KnowledgeError;
use sw_core::providers::ProviderError;
use sw_core::session::SessionError;

use crate::routes::json_response;

/// The closed set of machine-readable error codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    InvalidBody,
    UnknownScenario,
    InvalidCustomDescription,
    SessionNotFound,
    ReportNotFound,
    AudioNotFound,
    NotFound,
    MethodNotAllowed,
    NoUserTurns,
    SttDisabled,
    PayloadTooLarge,
    UnsupportedMediaType,
    EmptyText,
    TextTooLong,
    FeedbackParseError,
    InternalError,
    ProviderUnavailable,
    ProviderError,
}

impl ErrorCode {
    pub const ALL: [ErrorCode; 18] = [
        ErrorCode::InvalidBody,
        ErrorCode::UnknownScenario,
        ErrorCode::InvalidCustomDescription,
        ErrorCode::SessionNotFound,
        ErrorCode::ReportNotFound,
        ErrorCode::AudioNotFound,
        ErrorCode::NotFound,
        ErrorCode::MethodNotAllowed,
        ErrorCode::NoUserTurns,
        ErrorCode::SttDisabled,
        ErrorCode::PayloadTooLarge,
        ErrorCode::UnsupportedMediaType,
        ErrorCode::EmptyText,
        ErrorCode::TextTooLong,
        ErrorCode::FeedbackParseError,
        ErrorCode::InternalError,
        ErrorCode::ProviderUnavailable,
        ErrorCode::ProviderError,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::InvalidBody => "invalid_body",
            ErrorCode::UnknownScenario => "unknown_scenario",
            ErrorCode::InvalidCustomDescription => "invalid_custom_description",
            ErrorCode::SessionNotFound => "session_not_found",
            ErrorCode::ReportNotFound => "report_not_found",
            ErrorCode::AudioNotFound => "audio_not_found",
            ErrorCode::NotFound => "not_found",
            ErrorCode::MethodNotAllowed => "method_not_allowed",
            ErrorCode::NoUserTurns => "no_user_turns",
            ErrorCode::SttDisabled => "stt_disabled",
            ErrorCode::PayloadTooLarge => "payload_too_large",
            ErrorCode::UnsupportedMediaType => "unsupported_media_type",
            ErrorCode::EmptyText => "empty_text",
            ErrorCode::TextTooLong => "text_too_long",
            ErrorCode::FeedbackParseError => "feedback_parse_error",
            ErrorCode::InternalError => "internal_error",
            ErrorCode::ProviderUnavailable => "provider_unavailable",
            ErrorCode::ProviderError => "provider_error",
        }
    }

    pub fn status(self) -> StatusCode {
        match self {
            ErrorCode::InvalidBody | ErrorCode::UnknownScenario | ErrorCode::InvalidCustomDescription => {
                StatusCode::BAD_REQUEST
            }
            ErrorCode::SessionNotFound | ErrorCode::ReportNotFound | ErrorCode::AudioNotFound | ErrorCode::NotFound => {
                StatusCode::NOT_FOUND
            }
            ErrorCode::MethodNotAllowed => StatusCode::METHOD_NOT_ALLOWED,
            ErrorCode::NoUserTurns | ErrorCode::SttDisabled => StatusCode::CONFLICT,
            ErrorCode::PayloadTooLarge => StatusCode::PAYLOAD_TOO_LARGE,
            ErrorCode::UnsupportedMediaType => StatusCode::UNSUPPORTED_MEDIA_TYPE,
            ErrorCode::EmptyText | ErrorCode::TextTooLong => StatusCode::UNPROCESSABLE_ENTITY,
            ErrorCode::FeedbackParseError | ErrorCode::InternalError => StatusCode::INTERNAL_SERVER_ERROR,
            ErrorCode::ProviderUnavailable | ErrorCode::ProviderError => StatusCode::BAD_GATEWAY,
        }
    }

    /// Whether repeating the same request may succeed.
    pub fn retryable(self) -> bool {
        matches!(self, ErrorCode::ProviderUnavailable)
    }
}

/// Wire form of every non-2xx response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: ErrorCode,
    pub message: String,
    pub retryable: bool,
}

/// A failed request. Messages never echo request content.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    pub fn status(&self) -> StatusCode {
        self.code.status()
    }

    pub fn body(&self) -> ErrorBody {
        ErrorBody { code: self.code, message: self.message.clone(), retryable: self.code.retryable() }
    }

    pub fn not_found() -> Self {
        Self::new(ErrorCode::NotFound, "no such route")
    }

    pub fn method_not_allowed() -> Self {
        Self::new(ErrorCode::MethodNotAllowed, "method not allowed for this route")
    }

    pub fn payload_too_large(limit: usize) -> Self {
        Self::new(ErrorCode::PayloadTooLarge, format!("request body exceeds {limit} bytes"))
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::InternalError, message)
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code.as_str(), self.message)
    }
}

impl std::error::Error for ApiError {}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        json_response(self.status(), &self.body())
    }
}

impl From<SessionError> for ApiError {
    fn from(err: SessionError) -> Self {
        let code = match err {
            SessionError::NotFound => ErrorCode::SessionNotFound,
            SessionError::UnknownScenario(_) => ErrorCode::UnknownScenario,
            SessionError::InvalidCustomDescription => ErrorCode::InvalidCustomDescription,
            SessionError::AmbiguousScenario => ErrorCode::InvalidBody,
            SessionError::EmptyTurn => ErrorCode::EmptyText,
        };
        Self::new(code, err.to_string())
    }
}

impl From<ProviderError> for ApiError {
    fn from(err: ProviderError) -> Self {
        let code = match err {
            ProviderError::Unavailable { .. } => ErrorCode::ProviderUnavailable,
            ProviderError::Auth { .. } | ProviderError::Rejected { .. } | ProviderError::MalformedResponse(_) => {
                ErrorCode::ProviderError
            }
            ProviderError::UnsupportedMediaType(_) => ErrorCode::UnsupportedMediaType,
            ProviderError::TextTooLong { .. } => ErrorCode::TextTooLong,
            ProviderError::InvalidRequest(_) => ErrorCode::InternalError,
        };
        let message = match code {
            ErrorCode::ProviderUnavailable => "the language provider is unavailable; try again".to_string(),
            ErrorCode::ProviderError => "the language provider rejected the request".to_string(),
            _ => err.to_string(),
        };
        Self::new(code, message)
    }
}

impl From<KnowledgeError> for ApiError {
    fn from(err: KnowledgeError) -> Self {
        match err {
            KnowledgeError::Provider(p) => p.into(),
            other => Self::internal(format!("retrieval failed: {other}")),
        }
    }
}

impl From<AgentError> for ApiError {
    fn from(err: AgentError) -> Self {
        match err {
            AgentError::EmptyInput => Self::new(ErrorCode::EmptyText, "text must not be empty"),
            AgentError::NoUserTurns => {
                Self::new(ErrorCode::NoUserTurns, "the session has no user turns to give feedback on")
            }
            AgentError::Provider(p) => p.into(),
            AgentError::Retrieval(k) => k.into(),
            AgentError::FeedbackParse(p) => Self::new(ErrorCode::FeedbackParseError, p.to_string()),
        }
    }
}
