//! Request and response bodies. Each response type has a schema under
//! `schemas/`.

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use sw_core::session::{Scenario, Session, Settings, Turn};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSessionRequest {
    #[serde(default)]
    pub scenario_id: Option<String>,
    #[serde(default)]
    pub custom_description: Option<String>,
    #[serde(default)]
    pub settings: Settings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreateSessionResponse {
    pub session_id: String,
    pub scenario: Scenario,
    pub settings: Settings,
    pub turn_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opening_line: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub session_id: String,
    pub scenario: Scenario,
    pub settings: Settings,
    pub turns: Vec<Turn>,
    pub turn_count: usize,
    pub has_report: bool,
    pub created_at: DateTime<Utc>,
    pub last_active_at: DateTime<Utc>,
}

impl From<&Session> for SessionView {
    fn from(s: &Session) -> Self {
        Self {
            session_id: s.id.to_string(),
            scenario: s.scenario.clone(),
            settings: s.settings,
            turns: s.turns.clone(),
            turn_count: s.turn_count(),
            has_report: s.last_report.is_some(),
            created_at: s.created_at,
            last_active_at: s.last_active_at,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MessageRequest {
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MessageResponse {
    pub reply: String,
    pub turn_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartResponse {
    pub session_id: String,
    pub turn_count: usize,
    pub scenario: Scenario,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AudioResponse {
    pub transcript: String,
    pub reply: String,
    pub turn_count: usize,
    /// One-shot URL for the synthesized reply; present only with TTS enabled.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reply_audio_url: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HealthResponse {
    pub status: String,
    pub index_chunks: usize,
    pub provider_mode: String,
}
