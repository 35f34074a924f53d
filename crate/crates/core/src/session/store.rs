use std::collections::HashMap;
use std::sync::{Arc, RwLock};
use std::time::Duration;

use base64::engine::general_purpose::URL_SAFE_NO_PAD;
use base64::Engine;
use chrono::{DateTime, Utc};
use rand::rngs::OsRng;
use rand::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use tokio::sync::{Mutex, OwnedMutexGuard};

use super::{Scenario, ScenarioChoice, ScenarioLibrary};
use crate::agents::FeedbackReport;
use crate::providers::AudioPayload;

/// Idle lifetime of a session.
pub const DEFAULT_TTL: Duration = Duration::from_secs(30 * 60);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SessionError {
    #[error("session not found")]
    NotFound,
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("custom scenario description must not be empty")]
    InvalidCustomDescription,
    #[error("provide exactly one of scenario_id or custom_description")]
    AmbiguousScenario,
    #[error("turn text must not be empty")]
    EmptyTurn,
}

/// 128 random bits from the OS, URL-safe base64 without padding (22 chars).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SessionId(String);

impl SessionId {
    pub fn generate() -> Self {
        let mut bytes = [0u8; 16];
        OsRng.fill_bytes(&mut bytes);
        SessionId(URL_SAFE_NO_PAD.encode(bytes))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for SessionId {
    fn from(s: &str) -> Self {
        SessionId(s.to_string())
    }
}

impl std::fmt::Display for SessionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TurnRole {
    User,
    Agent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Turn {
    pub role: TurnRole,
    pub text: String,
    pub at: DateTime<Utc>,
}

impl Turn {
    pub fn user(text: impl Into<String>) -> Self {
        Self { role: TurnRole::User, text: text.into(), at: Utc::now() }
    }

    pub fn agent(text: impl Into<String>) -> Self {
        Self { role: TurnRole::Agent, text: text.into(), at: Utc::now() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Settings {
    pub tts_enabled: bool,
    pub stt_enabled: bool,
}

#[derive(Debug, Clone)]
pub struct Session {
    pub id: SessionId,
    pub scenario: Scenario,
    pub turns: Vec<Turn>,
    pub settings: Settings,
    pub created_at: DateTime<Utc>,
    pub last_active_at: DateTime<Utc>,
    /// Most recent feedback, kept for export until restart or eviction.
    pub last_report: Option<FeedbackReport>,
    pending_audio: HashMap<String, AudioPayload>,
}

impl Session {
    fn new(scenario: Scenario, settings: Settings) -> Self {
        let now = Utc::now();
        Self {
            id: SessionId::generate(),
            scenario,
            turns: Vec::new(),
            settings,
            created_at: now,
            last_active_at: now,
            last_report: None,
            pending_audio: HashMap::new(),
        }
    }

    pub fn turn_count(&self) -> usize {
        self.turns.len()
    }

    pub fn user_turns(&self) -> impl Iterator<Item = &Turn> {
        self.turns.iter().filter(|t| t.role == TurnRole::User)
    }

    /// Clears turns, the cached report and pending audio; keeps id, scenario
    /// and settings.
    pub fn restart(&mut self) {
        self.turns.clear();
        self.last_report = None;
        self.pending_audio.clear();
        self.last_active_at = Utc::now();
    }

    /// Holds synthesized audio until [`take_audio`](Self::take_audio) is called
    /// with the returned token.
    pub fn stash_audio(&mut self, audio: AudioPayload) -> String {
        let token = SessionId::generate().0;
        self.pending_audio.insert(token.clone(), audio);
        token
    }

    /// Removes and returns stashed audio; a second call with the same token
    /// returns `None`.
    pub fn take_audio(&mut self, token: &str) -> Option<AudioPayload> {
        self.pending_audio.remove(token)
    }

    pub fn pending_audio_count(&self) -> usize {
        self.pending_audio.len()
    }
}

/// Exclusive access to one session. Operations on a session are serialized
/// by holding this guard.
pub type SessionGuard = OwnedMutexGuard<Session>;

/// Memory-only store shared by all request handlers.
#[derive(Debug, Default)]
pub struct SessionStore {
    sessions: RwLock<HashMap<SessionId, Arc<Mutex<Session>>>>,
}

impl SessionStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session map poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn create(&self, scenario: Scenario, settings: Settings) -> Session {
        let session = Session::new(scenario, settings);
        let snapshot = session.clone();
        self.sessions
            .write()
            .expect("session map poisoned")
            .insert(session.id.clone(), Arc::new(Mutex::new(session)));
        snapshot
    }

    pub fn create_session(
        &self,
        library: &ScenarioLibrary,
        choice: &ScenarioChoice,
        settings: Settings,
    ) -> Result<Session, SessionError> {
        let scenario = library.resolve(choice)?;
        Ok(self.create(scenario, settings))
    }

    fn handle(&self, id: &SessionId) -> Result<Arc<Mutex<Session>>, SessionError> {
        self.sessions
            .read()
            .expect("session map poisoned")
            .get(id)
            .cloned()
            .ok_or(SessionError::NotFound)
    }

    /// Locks the session for exclusive use and marks it active.
    pub async fn lock(&self, id: &SessionId) -> Result<SessionGuard, SessionError> {
        let mut guard = self.handle(id)?.lock_owned().await;
        guard.last_active_at = Utc::now();
        Ok(guard)
    }

    /// Consistent snapshot of the session.
    pub async fn get(&self, id: &SessionId) -> Result<Session, SessionError> {
        Ok(self.handle(id)?.lock().await.clone())
    }

    pub async fn append_turn(&self, id: &SessionId, turn: Turn) -> Result<(), SessionError> {
        if turn.text.trim().is_empty() {
            return Err(SessionError::EmptyTurn);
        }
        self.lock(id).await?.turns.push(turn);
        Ok(())
    }

    pub async fn restart(&self, id: &SessionId) -> Result<Session, SessionError> {
        let mut guard = self.lock(id).await?;
        guard.restart();
        Ok(guard.clone())
    }

    pub fn remove(&self, id: &SessionId) -> bool {
        self.sessions.write().expect("session map poisoned").remove(id).is_some()
    }

    /// Drops every session idle for longer than `ttl` at `now`. Sessions that
    /// are currently locked are in use and kept.
    pub fn evict_expired(&self, now: DateTime<Utc>, ttl: Duration) -> usize {
        let ttl = chrono::Duration::from_std(ttl).unwrap_or(chrono::Duration::MAX);
        let mut map = self.sessions.write().expect("session map poisoned");
        let before = map.len();
        map.retain(|_, session| match session.try_lock() {
            Ok(s) => s.last_active_at + ttl >= now,
            Err(_) => true,
        });
        before - map.len()
    }
}
