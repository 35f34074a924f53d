use std::sync::Arc;

use sw_core::knowledge::DEFAULT_TOP_K;
use sw_core::providers::{OpenAiProvider, Provider, ProviderMode, StubProvider, STUB_EMBED_DIM};
use sw_core::session::{ScenarioLibrary, SessionStore};
use sw_core::Index;

use crate::config::{ConfigError, ServerConfig};

/// Shared handler state. The index is read-only while serving.
#[derive(Clone)]
pub struct AppState {
    pub store: Arc<SessionStore>,
    pub library: Arc<ScenarioLibrary>,
    pub index: Arc<Index>,
    pub provider: Arc<dyn Provider>,
    pub top_k: usize,
}

impl AppState {
    pub fn new(provider: Arc<dyn Provider>, index: Index) -> Self {
        Self {
            store: Arc::new(SessionStore::new()),
            library: Arc::new(ScenarioLibrary::bundled()),
            index: Arc::new(index),
            provider,
            top_k: DEFAULT_TOP_K,
        }
    }

    /// Offline state backed by [`StubProvider`].
    pub fn stub(index: Index) -> Self {
        Self::new(Arc::new(StubProvider::new()), index)
    }

    /// Loads the configured index and builds the configured provider.
    pub fn from_config(config: &ServerConfig) -> Result<Self, ConfigError> {
        let index = match &config.index_path {
            Some(path) => Index::load(path)?,
            None => Index::new(STUB_EMBED_DIM),
        };
        let provider: Arc<dyn Provider> = match config.provider_mode {
            ProviderMode::Live => Arc::new(OpenAiProvider::new(config.provider.clone())?),
            ProviderMode::Stub => {
                if !index.is_empty() && index.dim() != STUB_EMBED_DIM {
                    return Err(ConfigError::Invalid(format!(
                        "index dimension {} does not match the stub embedder ({STUB_EMBED_DIM}); rebuild it with --embedder stub",
                        index.dim()
                    )));
                }
                Arc::new(StubProvider::new())
            }
        };
        let mut state = Self::new(provider, index);
        state.top_k = config.top_k;
        Ok(state)
    }
}
