// SPDX-License-Identifier: Apache-2.0

//! Tunable constants, loadable from TOML or JSON.
//!
//! ```toml
//! [taint]
//! control = 1.0
//! data = 0.85
//! state = 0.70
//! threshold = 0.1
//!
//! [paths]
//! max_len = 24
//! max_paths = 256
//!
//! [rules]
//! min_guard_seconds = 900
//! gambling_keywords = ["lottery", "casino"]
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::EdgeKind;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid config {path}: {message}")]
    Invalid { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub taint: TaintConfig,
    pub paths: PathConfig,
    pub rules: RuleConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TaintConfig {
    pub control: f64,
    pub data: f64,
    pub state: f64,
    /// Levels at or below this are treated as untainted.
    pub threshold: f64,
}

impl Default for TaintConfig {
    fn default() -> Self {
        Self {
            control: 1.0,
            data: 0.85,
            state: 0.70,
            threshold: 0.1,
        }
    }
}

impl TaintConfig {
    pub fn factor(&self, kind: EdgeKind) -> f64 {
        match kind {
            EdgeKind::Control => self.control,
            EdgeKind::Data => self.data,
            EdgeKind::State => self.state,
            EdgeKind::Flow => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathConfig {
    pub max_len: usize,
    pub max_paths: usize,
}

impl Default for PathConfig {
    fn default() -> Self {
        Self {
            max_len: 24,
            max_paths: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RuleConfig {
    pub gambling_keywords: Vec<String>,
    /// State variables whose names start with one of these words hold a prize.
    pub prize_keywords: Vec<String>,
    /// Smallest delay accepted by the deadline and cooldown guard rules.
    pub min_guard_seconds: u64,
}

impl Default for RuleConfig {
    fn default() -> Self {
        let words = |ws: &[&str]| ws.iter().map(|w| w.to_string()).collect();
        Self {
            gambling_keywords: words(&[
                "lottery", "lotto", "gambl", "casino", "bet", "jackpot", "prize", "winner",
                "raffle",
            ]),
            prize_keywords: words(&["winner", "prize", "reward", "jackpot", "payout"]),
            min_guard_seconds: 900,
        }
    }
}

impl Config {
    /// Reads a config file; `.json` files are parsed as JSON, anything else as TOML.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: shown.clone(),
            source,
        })?;
        let invalid = |message: String| ConfigError::Invalid {
            path: shown.clone(),
            message,
        };
        let config: Config = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| invalid(e.to_string()))?
        } else {
            toml::from_str(&text).map_err(|e| invalid(e.to_string()))?
        };
        config.validate().map_err(invalid)?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), String> {
        let t = &self.taint;
        for (name, v) in [
            ("control", t.control),
            ("data", t.data),
            ("state", t.state),
            ("threshold", t.threshold),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("taint.{name} must lie in [0, 1], got {v}"));
            }
        }
        if self.paths.max_len == 0 || self.paths.max_paths == 0 {
            return Err("paths.max_len and paths.max_paths must be positive".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = Config::default();
        assert_eq!(c.taint.factor(EdgeKind::Control), 1.0);
        assert_eq!(c.taint.factor(EdgeKind::Data), 0.85);
        assert_eq!(c.taint.factor(EdgeKind::State), 0.70);
        assert_eq!(c.taint.factor(EdgeKind::Flow), 0.0);
        assert_eq!(c.paths.max_len, 24);
        assert_eq!(c.rules.min_guard_seconds, 900);
    }

    #[test]
    fn partial_toml_and_json() {
        let dir = tempfile::tempdir().unwrap();
        let toml_path = dir.path().join("c.toml");
        std::fs::write(&toml_path, "[taint]\ndata = 0.5\n[paths]\nmax_paths = 8\n").unwrap();
        let c = Config::load(&toml_path).unwrap();
        assert_eq!(c.taint.data, 0.5);
        assert_eq!(c.taint.state, 0.70);
        assert_eq!(c.paths.max_paths, 8);

        let json_path = dir.path().join("c.json");
        std::fs::write(&json_path, r#"{"rules": {"min_guard_seconds": 60}}"#).unwrap();
        assert_eq!(Config::load(&json_path).unwrap().rules.min_guard_seconds, 60);
    }

    #[test]
    fn rejects_out_of_range_and_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, "[taint]\ndata = 1.5\n").unwrap();
        assert!(matches!(Config::load(&p), Err(ConfigError::Invalid { .. })));
        std::fs::write(&p, "[taint]\ndecay = 0.5\n").unwrap();
        assert!(matches!(Config::load(&p), Err(ConfigError::Invalid { .. })));
        assert!(matches!(
            Config::load(&dir.path().join("missing.toml")),
            Err(ConfigError::Io { .. })
        ));
    }
}
