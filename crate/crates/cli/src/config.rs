//! `key = value` configuration files.

use std::fmt;

use regfac_core::classify::DEFAULT_TRIAL_BOUND;
use regfac_core::factor::DEFAULT_TRAVERSAL_BITS;
use regfac_core::regulator::DEFAULT_CROSS_CHECK_LIMIT;
use serde::{Deserialize, Serialize};

/// Distances are IEEE doubles; no other precision is implemented.
pub const SUPPORTED_PRECISION_BITS: u32 = 53;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    pub precision_bits: u32,
    /// Cap on continued-fraction steps while looking for the period.
    pub step_cap: Option<u64>,
    pub trial_bound: u64,
    pub max_traversal_bits: u32,
    pub cross_check_limit: u64,
    pub workers: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            precision_bits: SUPPORTED_PRECISION_BITS,
            step_cap: None,
            trial_bound: DEFAULT_TRIAL_BOUND,
            max_traversal_bits: DEFAULT_TRAVERSAL_BITS,
            cross_check_limit: DEFAULT_CROSS_CHECK_LIMIT,
            workers: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "config line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("{key}: expected a non-negative integer, got {value:?}"))
}

impl Config {
    /// Defaults overridden by each `key = value` line of `text`. Blank
    /// lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| ConfigError {
                line: Some(i + 1),
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            cfg.set(key.trim(), value.trim()).map_err(err)?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "precision_bits" => {
                let bits: u32 = number(key, value)?;
                if bits != SUPPORTED_PRECISION_BITS {
                    return Err(format!(
                        "precision_bits: only {SUPPORTED_PRECISION_BITS} (double precision) is supported"
                    ));
                }
                self.precision_bits = bits;
            }
            "step_cap" => self.step_cap = Some(number(key, value)?),
            "trial_bound" => self.trial_bound = number(key, value)?,
            "max_traversal_bits" => self.max_traversal_bits = number(key, value)?,
            "cross_check_limit" => self.cross_check_limit = number(key, value)?,
            "workers" => {
                let w: usize = number(key, value)?;
                if w == 0 {
                    return Err("workers: must be at least 1".into());
                }
                self.workers = Some(w);
            }
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }
}
