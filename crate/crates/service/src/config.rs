use std::path::{Path, PathBuf};

use graphdb_core::scheduler::QueueConfig;
use serde::Deserialize;

use crate::auth::Role;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("queue levels: {0}")]
    Queue(String),
    #[error("api key for {0:?} is empty")]
    EmptyKey(String),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApiKeyConfig {
    pub key: String,
    pub name: String,
    pub role: Role,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub listen: String,
    /// In-memory store when unset.
    pub data_dir: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores.
    pub workers: Option<usize>,
    /// Per-level time limits in seconds.
    pub queue_levels: Vec<f64>,
    pub durable: bool,
    pub api_keys: Vec<ApiKeyConfig>,
    /// Empty allows any origin.
    pub cors_origins: Vec<String>,
    /// Requests per minute per caller; unlimited when unset.
    pub rate_limit: Option<u32>,
    pub max_body_bytes: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            listen: "127.0.0.1:8080".into(),
            data_dir: None,
            workers: None,
            queue_levels: vec![60.0, 600.0, 6000.0],
            durable: true,
            api_keys: Vec::new(),
            cors_origins: Vec::new(),
            rate_limit: None,
            max_body_bytes: 10 * 1024 * 1024,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let c: Config = toml::from_str(text)?;
        c.queue()?;
        if let Some(k) = c.api_keys.iter().find(|k| k.key.is_empty()) {
            return Err(ConfigError::EmptyKey(k.name.clone()));
        }
        Ok(c)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
        Self::from_toml(&text)
    }

    pub fn queue(&self) -> Result<QueueConfig, ConfigError> {
        QueueConfig::from_secs(&self.queue_levels).map_err(|e| ConfigError::Queue(e.to_string()))
    }
}
