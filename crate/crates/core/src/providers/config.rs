use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use url::Url;

use super::ProviderError;

/// Bearer token for the upstream API.
///
/// `Debug`, `Display` and `Serialize` all redact the value; only
/// [`ApiKey::expose`] reveals it.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct ApiKey(String);

impl ApiKey {
    pub fn new(key: impl Into<String>) -> Self {
        Self(key.into())
    }

    pub fn expose(&self) -> &str {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for ApiKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ApiKey(<redacted>)")
    }
}

impl fmt::Display for ApiKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<redacted>")
    }
}

impl Serialize for ApiKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str("<redacted>")
    }
}

impl<'de> Deserialize<'de> for ApiKey {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer).map(ApiKey)
    }
}

/// Connection settings for an OpenAI-compatible endpoint.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProviderConfig {
    pub base_url: Url,
    pub api_key: ApiKey,
    pub chat_model: String,
    pub embed_model: String,
    pub stt_model: String,
    pub tts_model: String,
    pub tts_voice: String,
    /// Per-request timeout in seconds.
    pub timeout_secs: f64,
    pub max_retries: u32,
    /// First backoff ceiling; doubles on each retry, full jitter.
    pub retry_base_ms: u64,
}

impl Default for ProviderConfig {
    fn default() -> Self {
        Self {
            base_url: Url::parse("https://api.openai.com/v1").expect("static url"),
            api_key: ApiKey::default(),
            chat_model: "gpt-4o-mini".into(),
            embed_model: "text-embedding-3-small".into(),
            stt_model: "whisper-1".into(),
            tts_model: "tts-1".into(),
            tts_voice: "alloy".into(),
            timeout_secs: 30.0,
            max_retries: 3,
            retry_base_ms: 250,
        }
    }
}

impl ProviderConfig {
    pub const ENV_API_KEY: &'static str = "SW_API_KEY";
    pub const ENV_BASE_URL: &'static str = "SW_BASE_URL";
    pub const ENV_CHAT_MODEL: &'static str = "SW_CHAT_MODEL";
    pub const ENV_EMBED_MODEL: &'static str = "SW_EMBED_MODEL";

    /// Overlays `SW_*` variables from the process environment.
    pub fn apply_env(&mut self) -> Result<(), ProviderError> {
        self.apply_env_with(|name| std::env::var(name).ok())
    }

    /// Overlays `SW_*` variables fetched through `lookup`.
    pub fn apply_env_with(
        &mut self,
        lookup: impl Fn(&str) -> Option<String>,
    ) -> Result<(), ProviderError> {
        if let Some(key) = lookup(Self::ENV_API_KEY) {
            self.api_key = ApiKey::new(key);
        }
        if let Some(url) = lookup(Self::ENV_BASE_URL) {
            self.base_url = Url::parse(&url).map_err(|e| {
                ProviderError::InvalidRequest(format!("{} is not an absolute URL: {e}", Self::ENV_BASE_URL))
            })?;
        }
        if let Some(model) = lookup(Self::ENV_CHAT_MODEL) {
            self.chat_model = model;
        }
        if let Some(model) = lookup(Self::ENV_EMBED_MODEL) {
            self.embed_model = model;
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), ProviderError> {
        if self.base_url.cannot_be_a_base() || !matches!(self.base_url.scheme(), "http" | "https") {
            return Err(ProviderError::InvalidRequest("base_url must be an absolute http(s) URL".into()));
        }
        if !(self.timeout_secs.is_finite() && self.timeout_secs > 0.0) {
            return Err(ProviderError::InvalidRequest("timeout_secs must be positive".into()));
        }
        Ok(())
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.timeout_secs)
    }

    /// `{base_url}/{path}` without doubling slashes.
    pub fn endpoint(&self, path: &str) -> String {
        format!("{}/{}", self.base_url.as_str().trim_end_matches('/'), path.trim_start_matches('/'))
    }
}
