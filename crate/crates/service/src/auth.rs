use std::collections::HashMap;

use axum::http::HeaderMap;
use serde::{Deserialize, Serialize};

use crate::config::ApiKeyConfig;
use crate::error::ApiError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Reader,
    Contributor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Principal {
    pub name: String,
    pub role: Role,
}

#[derive(Debug, Clone, Default)]
pub struct KeyRing {
    keys: HashMap<String, Principal>,
}

impl KeyRing {
    pub fn new(keys: &[ApiKeyConfig]) -> Self {
        KeyRing {
            keys: keys.iter().map(|k| (k.key.clone(), Principal { name: k.name.clone(), role: k.role })).collect(),
        }
    }

    /// `Authorization: Bearer KEY` or `X-Api-Key: KEY`. No key is an
    /// anonymous caller; a key we do not know is an error.
    pub fn identify(&self, headers: &HeaderMap) -> Result<Option<Principal>, ApiError> {
        let bearer = headers
            .get("authorization")
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.strip_prefix("Bearer "))
            .map(str::trim);
        let key = bearer.or_else(|| headers.get("x-api-key").and_then(|v| v.to_str().ok()).map(str::trim));
        match key {
            None => Ok(None),
            Some(k) => self.keys.get(k).cloned().map(Some).ok_or_else(|| ApiError::unauthorized("unknown API key")),
        }
    }

    pub fn contributor(&self, headers: &HeaderMap) -> Result<Principal, ApiError> {
        match self.identify(headers)? {
            None => Err(ApiError::unauthorized("this endpoint needs an API key")),
            Some(p) if p.role == Role::Contributor => Ok(p),
            Some(p) => Err(ApiError::forbidden(format!("{} has read-only access", p.name))),
        }
    }
}
