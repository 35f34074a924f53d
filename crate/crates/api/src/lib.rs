//! HTTP front door for the practice service.
//!
//! [`router`] builds the axum application over an [`AppState`]; [`serve`]
//! binds it, runs the session evictor and shuts down gracefully. Response
//! bodies follow the JSON schemas under `schemas/`, and every non-2xx body
//! is an [`ApiError`] with a code from [`ErrorCode::ALL`].

mod config;
mod dto;
mod error;
mod routes;
mod server;
mod state;

pub use config::{ConfigError, ServerConfig};
pub use dto::{
    AudioResponse, CreateSessionRequest, CreateSessionResponse, HealthResponse, MessageRequest,
    MessageResponse, RestartResponse, SessionView,
};
pub use error::{ApiError, ErrorBody, ErrorCode};
pub use routes::{router, MAX_AUDIO_BYTES, MAX_JSON_BODY_BYTES, MAX_TEXT_BYTES};
pub use server::{serve, spawn_evictor, ServeError};
pub use state::AppState;

/// JSON Schema (draft 2020-12) for every request and response body, one
/// entry per type under `$defs`.
pub const API_SCHEMA: &str = include_str!("../schemas/api.json");
