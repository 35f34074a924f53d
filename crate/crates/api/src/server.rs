use std::future::Future;
use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

use axum::http::{HeaderValue, Method};
use chrono::Utc;
use sw_core::session::SessionStore;
use thiserror::Error;
use tokio::net::TcpListener;
use tokio::task::JoinHandle;
use tower_http::cors::{AllowOrigin, CorsLayer};

use crate::config::{ConfigError, ServerConfig};
use crate::routes::router;
use crate::state::AppState;

#[derive(Debug, Error)]
pub enum ServeError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        #[source]
        source: std::io::Error,
    },
    #[error("server error: {0}")]
    Io(#[from] std::io::Error),
}

/// Periodically drops sessions idle for longer than `ttl`.
pub fn spawn_evictor(store: Arc<SessionStore>, ttl: Duration, every: Duration) -> JoinHandle<()> {
    tokio::spawn(async move {
        let mut ticker = tokio::time::interval(every);
        ticker.set_missed_tick_behavior(tokio::time::MissedTickBehavior::Delay);
        loop {
            ticker.tick().await;
            let evicted = store.evict_expired(Utc::now(), ttl);
            if evicted > 0 {
                tracing::info!(evicted, remaining = store.len(), "evicted idle sessions");
            }
        }
    })
}

fn cors_layer(origins: &[String]) -> Option<CorsLayer> {
    if origins.is_empty() {
        return None;
    }
    let allow = if origins.iter().any(|o| o == "*") {
        AllowOrigin::any()
    } else {
        AllowOrigin::list(origins.iter().filter_map(|o| HeaderValue::from_str(o.trim_end_matches('/')).ok()))
    };
    Some(
        CorsLayer::new()
            .allow_origin(allow)
            .allow_methods([Method::GET, Method::POST])
            .allow_headers([axum::http::header::CONTENT_TYPE])
            .expose_headers([axum::http::header::CONTENT_DISPOSITION]),
    )
}

/// Binds the configured address and serves until `shutdown` resolves.
/// `on_bound` receives the bound address before the first request.
pub async fn serve(
    config: ServerConfig,
    on_bound: impl FnOnce(SocketAddr),
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> Result<(), ServeError> {
    let state = AppState::from_config(&config)?;
    let addr = SocketAddr::new(config.host, config.port);
    let listener = TcpListener::bind(addr).await.map_err(|source| ServeError::Bind { addr, source })?;
    let bound = listener.local_addr()?;

    let evictor = spawn_evictor(state.store.clone(), config.session_ttl(), config.eviction_interval());
    let mut app = router(state.clone());
    if let Some(cors) = cors_layer(&config.cors_origins) {
        app = app.layer(cors);
    }
    tracing::info!(
        addr = %bound,
        provider_mode = state.provider.mode().as_str(),
        index_chunks = state.index.len(),
        "listening"
    );
    on_bound(bound);
    let result = axum::serve(listener, app).with_graceful_shutdown(shutdown).await;
    evictor.abort();
    tracing::info!("server stopped");
    result.map_err(ServeError::Io)
}
