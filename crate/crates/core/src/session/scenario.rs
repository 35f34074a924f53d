use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::SessionError;

pub const CUSTOM_SCENARIO_ID: &str = "custom";

/// Custom scenario titles are the first this many characters of the description.
pub const CUSTOM_TITLE_CHARS: usize = 40;

const BUNDLED_SCENARIOS: &str = include_str!("../../assets/scenarios.toml");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub id: String,
    pub title: String,
    pub description: String,
    pub agent_role: String,
    #[serde(default)]
    pub preset: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opening_line: Option<String>,
}

impl Scenario {
    /// Session-scoped scenario typed by the user.
    pub fn custom(description: &str) -> Result<Self, SessionError> {
        let description = description.trim();
        if description.is_empty() {
            return Err(SessionError::InvalidCustomDescription);
        }
        Ok(Self {
            id: CUSTOM_SCENARIO_ID.to_string(),
            title: description.chars().take(CUSTOM_TITLE_CHARS).collect::<String>().trim_end().to_string(),
            description: description.to_string(),
            agent_role: "conversation partner".to_string(),
            preset: false,
            opening_line: None,
        })
    }
}

/// Either a preset id or a custom description, never both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioChoice {
    Preset(String),
    Custom(String),
}

impl ScenarioChoice {
    pub fn from_parts(scenario_id: Option<String>, custom_description: Option<String>) -> Result<Self, SessionError> {
        match (scenario_id, custom_description) {
            (Some(id), None) => Ok(ScenarioChoice::Preset(id)),
            (None, Some(desc)) => Ok(ScenarioChoice::Custom(desc)),
            _ => Err(SessionError::AmbiguousScenario),
        }
    }
}

#[derive(Debug, Error)]
pub enum LibraryError {
    #[error("scenario file is not valid TOML: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("duplicate scenario id `{0}`")]
    DuplicateId(String),
    #[error("scenario `{0}` is invalid: {1}")]
    Invalid(String, &'static str),
}

#[derive(Deserialize)]
struct LibraryFile {
    #[serde(default)]
    scenario: Vec<ScenarioRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioRecord {
    id: String,
    title: String,
    agent_role: String,
    description: String,
    opening_line: Option<String>,
}

/// Preset scenarios in file order.
#[derive(Debug, Clone)]
pub struct ScenarioLibrary {
    scenarios: Vec<Scenario>,
}

impl Default for ScenarioLibrary {
    fn default() -> Self {
        Self::bundled()
    }
}

impl ScenarioLibrary {
    /// The presets shipped with the crate.
    pub fn bundled() -> Self {
        Self::from_toml(BUNDLED_SCENARIOS).expect("bundled scenario library is valid")
    }

    pub fn from_toml(text: &str) -> Result<Self, LibraryError> {
        let file: LibraryFile = toml::from_str(text)?;
        let mut scenarios: Vec<Scenario> = Vec::with_capacity(file.scenario.len());
        for rec in file.scenario {
            let id = rec.id.trim().to_string();
            if id.is_empty() || !id.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-') {
                return Err(LibraryError::Invalid(id, "id must be a lowercase slug"));
            }
            if id == CUSTOM_SCENARIO_ID {
                return Err(LibraryError::Invalid(id, "`custom` is reserved"));
            }
            if rec.description.trim().is_empty() {
                return Err(LibraryError::Invalid(id, "description must not be empty"));
            }
            if scenarios.iter().any(|s| s.id == id) {
                return Err(LibraryError::DuplicateId(id));
            }
            scenarios.push(Scenario {
                id,
                title: rec.title.trim().to_string(),
                description: rec.description.trim().to_string(),
                agent_role: rec.agent_role.trim().to_string(),
                preset: true,
                opening_line: rec.opening_line.map(|l| l.trim().to_string()).filter(|l| !l.is_empty()),
            });
        }
        Ok(Self { scenarios })
    }

    pub fn list(&self) -> &[Scenario] {
        &self.scenarios
    }

    pub fn get(&self, id: &str) -> Option<&Scenario> {
        self.scenarios.iter().find(|s| s.id == id)
    }

    pub fn resolve(&self, choice: &ScenarioChoice) -> Result<Scenario, SessionError> {
        match choice {
            ScenarioChoice::Preset(id) => {
                self.get(id).cloned().ok_or_else(|| SessionError::UnknownScenario(id.clone()))
            }
            ScenarioChoice::Custom(desc) => Scenario::custom(desc),
        }
    }
}
