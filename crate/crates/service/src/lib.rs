//! HTTP API over the graph store. Reads are anonymous; writes need a
//! contributor key.

pub mod auth;
pub mod config;
pub mod error;
mod limit;
mod routes;

use std::sync::Arc;

use axum::extract::DefaultBodyLimit;
use axum::http::HeaderValue;
use axum::Router;
use graphdb_core::scheduler::WorkerPool;
use graphdb_core::store::{Store, StoreComputer, StoreError, StoreOptions};
use tower_http::cors::{AllowOrigin, CorsLayer};

pub use auth::{KeyRing, Principal, Role};
pub use config::{ApiKeyConfig, Config, ConfigError};
pub use error::{ApiError, ErrorBody};

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<Store>,
    pub keys: Arc<KeyRing>,
    pool: Option<Arc<WorkerPool>>,
    limiter: Option<Arc<limit::RateLimiter>>,
}

impl AppState {
    /// State without workers: uploads queue jobs that nothing runs.
    pub fn new(store: Arc<Store>, keys: KeyRing) -> Self {
        AppState { store, keys: Arc::new(keys), pool: None, limiter: None }
    }

    pub fn with_pool(mut self, pool: WorkerPool) -> Self {
        self.pool = Some(Arc::new(pool));
        self
    }

    pub fn with_rate_limit(mut self, per_minute: u32) -> Self {
        self.limiter = Some(Arc::new(limit::RateLimiter::new(per_minute)));
        self
    }

    fn wake_workers(&self) {
        if let Some(p) = &self.pool {
            p.notify();
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub fn router(state: AppState, config: &Config) -> Router {
    let cors = if config.cors_origins.is_empty() {
        CorsLayer::permissive()
    } else {
        let origins: Vec<HeaderValue> = config.cors_origins.iter().filter_map(|o| o.parse().ok()).collect();
        CorsLayer::new().allow_origin(AllowOrigin::list(origins)).allow_headers(tower_http::cors::Any).allow_methods(tower_http::cors::Any)
    };
    let state = match config.rate_limit {
        Some(n) if state.limiter.is_none() => state.with_rate_limit(n),
        _ => state,
    };
    routes::routes(state).layer(DefaultBodyLimit::max(config.max_body_bytes)).layer(cors)
}

/// Opens the store, recovers interrupted jobs, starts workers and builds
/// the router.
pub fn build(config: &Config) -> Result<(AppState, Router), ServeError> {
    let queue = config.queue()?;
    let store = Arc::new(match &config.data_dir {
        Some(dir) => Store::open(dir, StoreOptions { queue, durable: config.durable })?,
        None => Store::in_memory(queue),
    });
    store.recover();
    let workers = config.workers.unwrap_or_else(WorkerPool::default_workers);
    let pool = WorkerPool::start(workers, store.clone(), Arc::new(StoreComputer::new(store.clone())));
    let state = AppState::new(store, KeyRing::new(&config.api_keys)).with_pool(pool);
    let app = router(state.clone(), config);
    Ok((state, app))
}

pub async fn serve(config: Config) -> Result<(), ServeError> {
    let (state, app) = build(&config)?;
    let listener = tokio::net::TcpListener::bind(&config.listen).await?;
    tracing::info!(addr = %listener.local_addr()?, graphs = state.store.len(), "listening");
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    if state.store.data_dir().is_some() {
        state.store.checkpoint()?;
    }
    Ok(())
}
