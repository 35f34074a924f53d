//! Scenario library and the memory-only session store.
//!
//! Nothing in this module touches the filesystem: sessions, transcripts,
//! cached reports and synthesized audio live in process memory only and are
//! dropped on restart, eviction or server shutdown.

mod scenario;
mod store;

pub use scenario::{Scenario, ScenarioChoice, ScenarioLibrary, CUSTOM_SCENARIO_ID, CUSTOM_TITLE_CHARS};
pub use store::{
    Session, SessionError, SessionGuard, SessionId, SessionStore, Settings, Turn, TurnRole, DEFAULT_TTL,
};
