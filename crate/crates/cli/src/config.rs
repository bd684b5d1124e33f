//! Run configuration: a plain key-value file with CLI overrides, an
//! environment variable for the default table directory, and a stable hash
//! that ties outputs to the exact inputs that produced them.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub const TABLE_DIR_ENV: &str = "E7LIFT_TABLE_DIR";

#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub newform: Option<PathBuf>,
    pub siegel: Vec<PathBuf>,
    pub det_bound: Option<i64>,
    pub trace_bound: Option<i64>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub precision: Option<u32>,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{path}:{line}: malformed line (expected `key = value`)")]
    Malformed { path: String, line: usize },
    #[error("{path}:{line}: unknown key {key:?}")]
    UnknownKey {
        path: String,
        line: usize,
        key: String,
    },
    #[error("{path}:{line}: bad value for {key}: {value}")]
    BadValue {
        path: String,
        line: usize,
        key: String,
        value: String,
    },
    #[error("referenced file does not exist: {0}")]
    MissingFile(PathBuf),
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment. Repeated `siegel`
    /// keys accumulate.
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path)?;
        let name = path.display().to_string();
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Malformed {
                path: name.clone(),
                line: lineno + 1,
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = || ConfigError::BadValue {
                path: name.clone(),
                line: lineno + 1,
                key: key.to_string(),
                value: value.to_string(),
            };
            match key {
                "newform" => cfg.newform = Some(PathBuf::from(value)),
                "siegel" => cfg.siegel.push(PathBuf::from(value)),
                "out" => cfg.out = Some(PathBuf::from(value)),
                "det_bound" => cfg.det_bound = Some(value.parse().map_err(|_| bad())?),
                "trace_bound" => cfg.trace_bound = Some(value.parse().map_err(|_| bad())?),
                "seed" => cfg.seed = value.parse().map_err(|_| bad())?,
                "precision" => cfg.precision = Some(value.parse().map_err(|_| bad())?),
                other => {
                    return Err(ConfigError::UnknownKey {
                        path: name,
                        line: lineno + 1,
                        key: other.to_string(),
                    })
                }
            }
        }
        Ok(cfg)
    }

    /// Adds every `*.siegel` file from the default table directory when no
    /// explicit tables were given.
    pub fn apply_table_dir_default(&mut self) {
        if !self.siegel.is_empty() {
            return;
        }
        if let Ok(dir) = std::env::var(TABLE_DIR_ENV) {
            if let Ok(entries) = fs::read_dir(dir) {
                let mut found: Vec<PathBuf> = entries
                    .filter_map(|e| e.ok())
                    .map(|e| e.path())
                    .filter(|p| p.extension().map(|x| x == "siegel").unwrap_or(false))
                    .collect();
                found.sort();
                self.siegel = found;
            }
        }
    }

    /// Fails fast when a referenced file is absent; content validation
    /// happens at load time.
    pub fn check_files_exist(&self) -> Result<(), ConfigError> {
        if let Some(p) = &self.newform {
            if !p.exists() {
                return Err(ConfigError::MissingFile(p.clone()));
            }
        }
        for p in &self.siegel {
            if !p.exists() {
                return Err(ConfigError::MissingFile(p.clone()));
            }
        }
        Ok(())
    }

    /// Canonical one-line rendering, the input of [`RunConfig::hash`].
    pub fn canonical_string(&self) -> String {
        let path = |p: &Option<PathBuf>| {
            p.as_ref()
                .map(|x| x.display().to_string())
                .unwrap_or_default()
        };
        let mut tables: Vec<String> = self.siegel.iter().map(|p| p.display().to_string()).collect();
        tables.sort();
        format!(
            "newform={};siegel={};det={};trace={};out={};seed={};precision={}",
            path(&self.newform),
            tables.join(","),
            self.det_bound.unwrap_or(-1),
            self.trace_bound.unwrap_or(-1),
            path(&self.out),
            self.seed,
            self.precision.map(i64::from).unwrap_or(-1),
        )
    }

    /// FNV-1a over the canonical string: stable across runs and platforms.
    pub fn hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in self.canonical_string().as_bytes() {
            h ^= *b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        h
    }
}
