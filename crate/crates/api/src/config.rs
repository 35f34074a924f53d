use std::net::IpAddr;
use std::path::{Path, PathBuf};
use std::time::Duration;

use axum::http::HeaderValue;
use serde::{Deserialize, Serialize};
use sw_core::knowledge::DEFAULT_TOP_K;
use sw_core::providers::{ProviderConfig, ProviderMode};
use sw_core::session::DEFAULT_TTL;
use thiserror::Error;

pub const ENV_HOST: &str = "SW_HOST";
pub const ENV_PORT: &str = "SW_PORT";
pub const ENV_PROVIDER_MODE: &str = "SW_PROVIDER_MODE";
pub const ENV_INDEX_PATH: &str = "SW_INDEX_PATH";
/// Comma-separated list of allowed browser origins, or `*`.
pub const ENV_CORS_ORIGIN: &str = "SW_CORS_ORIGIN";
pub const ENV_SESSION_TTL_SECS: &str = "SW_SESSION_TTL_SECS";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config file: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid value for {var}: {message}")]
    Env { var: &'static str, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("cannot load knowledge index: {0}")]
    Index(#[from] sw_core::knowledge::KnowledgeError),
    #[error("cannot build provider: {0}")]
    Provider(#[from] sw_core::providers::ProviderError),
}

/// Server configuration: TOML file first, then `SW_*` environment overrides.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServerConfig {
    pub host: IpAddr,
    pub port: u16,
    pub provider_mode: ProviderMode,
    /// Knowledge index built by `sw ingest`. Without one, feedback runs
    /// ungrounded.
    pub index_path: Option<PathBuf>,
    pub cors_origins: Vec<String>,
    pub session_ttl_secs: u64,
    pub eviction_interval_secs: u64,
    pub top_k: usize,
    pub provider: ProviderConfig,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self {
            host: IpAddr::from([127, 0, 0, 1]),
            port: 8080,
            provider_mode: ProviderMode::Live,
            index_path: None,
            cors_origins: Vec::new(),
            session_ttl_secs: DEFAULT_TTL.as_secs(),
            eviction_interval_secs: 60,
            top_k: DEFAULT_TOP_K,
            provider: ProviderConfig::default(),
        }
    }
}

impl ServerConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    /// Reads `path` (or defaults), applies the process environment and
    /// validates.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        Self::load_with(path, |k| std::env::var(k).ok())
    }

    pub fn load_with(path: Option<&Path>, lookup: impl Fn(&str) -> Option<String>) -> Result<Self, ConfigError> {
        let mut config = match path {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
                Self::from_toml(&text)?
            }
            None => Self::default(),
        };
        config.apply_env_with(lookup)?;
        config.validate()?;
        Ok(config)
    }

    pub fn apply_env_with(&mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        fn parsed<T: std::str::FromStr>(var: &'static str, value: &str) -> Result<T, ConfigError>
        where
            T::Err: std::fmt::Display,
        {
            value.trim().parse().map_err(|e: T::Err| ConfigError::Env { var, message: e.to_string() })
        }
        if let Some(v) = lookup(ENV_HOST) {
            self.host = parsed(ENV_HOST, &v)?;
        }
        if let Some(v) = lookup(ENV_PORT) {
            self.port = parsed(ENV_PORT, &v)?;
        }
        if let Some(v) = lookup(ENV_PROVIDER_MODE) {
            self.provider_mode = parsed(ENV_PROVIDER_MODE, &v)?;
        }
        if let Some(v) = lookup(ENV_INDEX_PATH) {
            self.index_path = (!v.trim().is_empty()).then(|| PathBuf::from(v.trim()));
        }
        if let Some(v) = lookup(ENV_CORS_ORIGIN) {
            self.cors_origins = v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
        }
        if let Some(v) = lookup(ENV_SESSION_TTL_SECS) {
            self.session_ttl_secs = parsed(ENV_SESSION_TTL_SECS, &v)?;
        }
        self.provider
            .apply_env_with(&lookup)
            .map_err(|e| ConfigError::Env { var: ProviderConfig::ENV_BASE_URL, message: e.to_string() })?;
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if self.session_ttl_secs == 0 {
            return invalid("session_ttl_secs must be positive");
        }
        if self.eviction_interval_secs == 0 {
            return invalid("eviction_interval_secs must be positive");
        }
        if self.top_k == 0 {
            return invalid("top_k must be at least 1");
        }
        for origin in &self.cors_origins {
            let ok = origin == "*"
                || ((origin.starts_with("http://") || origin.starts_with("https://"))
                    && HeaderValue::from_str(origin).is_ok()
                    && !origin.trim_end_matches('/').contains(char::is_whitespace));
            if !ok {
                return Err(ConfigError::Invalid(format!("invalid CORS origin {origin:?}")));
            }
        }
        if self.cors_origins.len() > 1 && self.cors_origins.iter().any(|o| o == "*") {
            return invalid("CORS origin `*` cannot be combined with other origins");
        }
        if self.provider_mode == ProviderMode::Live {
            self.provider.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
            if self.provider.api_key.is_empty() {
                return invalid("live provider mode requires an API key (provider.api_key or SW_API_KEY)");
            }
        }
        Ok(())
    }

    pub fn session_ttl(&self) -> Duration {
        Duration::from_secs(self.session_ttl_secs)
    }

    pub fn eviction_interval(&self) -> Duration {
        Duration::from_secs(self.eviction_interval_secs)
    }
}
