//! The machine-readable run report.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::Config;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// The arguments as given, program name first.
    pub command: Vec<String>,
    /// The input integer in decimal, when the command takes one.
    pub n: Option<String>,
    pub outcome: Outcome,
    pub trace: Option<Value>,
    pub timing_ms: f64,
    pub config: Config,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Factor {
        factor: String,
        cofactor: String,
    },
    Inapplicable,
    /// A command other than `factor` finished; its result.
    Done {
        value: Value,
    },
    Error {
        kind: String,
        message: String,
    },
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Factor { .. } | Outcome::Done { .. } => 0,
            Outcome::Inapplicable => 2,
            Outcome::Error { .. } => 1,
        }
    }
}

/// `x` rounded to 12 significant digits, printed in the shortest form that
/// reads back to the rounded value.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    rounded.to_string()
}
