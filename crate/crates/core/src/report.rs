//! JSON envelopes, run configuration and the on-disk result cache.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: &str = "mutower/1";
/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "MUTOWER_CACHE_DIR";
/// Integers above this are written as decimal strings.
pub const MAX_SAFE_INTEGER: u64 = 1 << 53;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

/// Everything that influences a computation, embedded in every report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Default p-adic precision `N`.
    pub precision: u32,
    /// Default T-truncation `M`.
    pub truncation: usize,
    pub enumeration_cap: u64,
    pub sieve_cap: u64,
    pub threads: Option<usize>,
    pub format: OutputFormat,
    pub cache_dir: Option<PathBuf>,
    /// Assumptions the caller asked to treat as true.
    pub assume: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: crate::padic::DEFAULT_PRECISION,
            truncation: 32,
            enumeration_cap: crate::propgroups::ENUMERATION_CAP as u64,
            sieve_cap: crate::census::SIEVE_CAP,
            threads: None,
            format: OutputFormat::Text,
            cache_dir: std::env::var_os(CACHE_ENV).map(PathBuf::from),
            assume: Vec::new(),
        }
    }
}

/// Replaces integers beyond `2^53` by their decimal strings.
pub fn stringify_large(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            let big = n.as_u64().is_some_and(|x| x > MAX_SAFE_INTEGER)
                || n.as_i64().is_some_and(|x| x.unsigned_abs() > MAX_SAFE_INTEGER);
            if big {
                Value::String(n.to_string())
            } else {
                Value::Number(n)
            }
        }
        Value::Array(a) => Value::Array(a.into_iter().map(stringify_large).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, stringify_large(v))).collect()),
        other => other,
    }
}

/// `{schema, command, config, result}`.
pub fn envelope<T: Serialize>(command: &str, config: &RunConfig, result: &T) -> Result<Value> {
    Ok(stringify_large(json!({
        "schema": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "result": serde_json::to_value(result)?,
    })))
}

pub fn error_envelope(command: &str, config: &RunConfig, err: &Error) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "error": { "kind": err.kind(), "message": err.to_string() },
    })
}

/// Content-addressed JSON store: one file per sha256 of `(kind, params)`.
#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn from_config(config: &RunConfig) -> Option<Self> {
        config.cache_dir.as_ref().map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key<P: Serialize>(kind: &str, params: &P) -> Result<String> {
        let canonical = serde_json::to_vec(&json!({ "schema": SCHEMA_VERSION, "kind": kind, "params": params }))?;
        Ok(hex::encode(Sha256::digest(&canonical)))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get<P: Serialize, T: DeserializeOwned>(&self, kind: &str, params: &P) -> Result<Option<T>> {
        let path = self.path(&Self::key(kind, params)?);
        match std::fs::read(&path) {
            Ok(bytes) => Ok(Some(serde_json::from_slice(&bytes)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    pub fn put<P: Serialize, T: Serialize>(&self, kind: &str, params: &P, value: &T) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.dir)?;
        let path = self.path(&Self::key(kind, params)?);
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, serde_json::to_vec_pretty(value)?)?;
        std::fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Returns the cached value, computing and storing it on a miss.
    pub fn get_or_compute<P, T, F>(&self, kind: &str, params: &P, compute: F) -> Result<T>
    where
        P: Serialize,
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        if let Some(v) = self.get(kind, params)? {
            return Ok(v);
        }
        let v = compute()?;
        self.put(kind, params, &v)?;
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_numbers_become_strings() {
        let v = stringify_large(json!({"a": [1u64, 1u64 << 60], "b": -(1i64 << 55), "c": 2.5}));
        assert_eq!(v, json!({"a": [1, "1152921504606846976"], "b": "-36028797018963968", "c": 2.5}));
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("mutower-cache-{}", std::process::id()));
        let cache = Cache::new(&dir);
        let params = json!({"p": 7, "x": 1000});
        assert_eq!(cache.get::<_, Vec<u64>>("t", &params).unwrap(), None);
        let mut calls = 0;
        for _ in 0..2 {
            let v: Vec<u64> = cache
                .get_or_compute("t", &params, || {
                    calls += 1;
                    Ok(vec![1, 2, 3])
                })
                .unwrap();
            assert_eq!(v, vec![1, 2, 3]);
        }
        assert_eq!(calls, 1);
        assert_ne!(Cache::key("t", &params).unwrap(), Cache::key("u", &params).unwrap());
        std::fs::remove_dir_all(dir).unwrap();
    }
}
