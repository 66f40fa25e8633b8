//! Command-line front end for `regfac-core`.
//!
//! [`run`] parses arguments, loads the optional config file, executes one
//! subcommand and writes either text or a JSON [`RunReport`].

pub mod args;
pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::Cli;
pub use config::Config;
pub use report::{Outcome, RunReport};

/// Exit code for malformed command lines.
pub const EXIT_USAGE: i32 = 64;

fn load_config(cli: &Cli) -> Result<Config, String> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            Config::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => Config::default(),
    };
    let o = &cli.overrides;
    let flags = [
        ("precision_bits", o.precision_bits.map(|v| v.to_string())),
        ("step_cap", o.step_cap.map(|v| v.to_string())),
        ("trial_bound", o.trial_bound.map(|v| v.to_string())),
        ("max_traversal_bits", o.max_traversal_bits.map(|v| v.to_string())),
        ("cross_check_limit", o.cross_check_limit.map(|v| v.to_string())),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    Ok(cfg)
}

/// Runs one command line and returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let echo: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return 0;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let cfg = match load_config(&cli) {
        Ok(cfg) => cfg,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            return 1;
        }
    };

    let start = Instant::now();
    let result = commands::execute(&cli.command, &cfg);
    let timing_ms = start.elapsed().as_secs_f64() * 1e3;
    let (n, outcome, trace, text) = match result {
        Ok(o) => (o.n, o.outcome, o.trace, o.text),
        Err((n, f)) => {
            let text = format!("error: {}\n", f.message);
            let outcome = Outcome::Error {
                kind: f.kind,
                message: f.message,
            };
            (n, outcome, None, text)
        }
    };
    let code = outcome.exit_code();
    if cli.json {
        let report = RunReport {
            command: echo,
            n,
            outcome,
            trace,
            timing_ms,
            config: cfg,
        };
        match serde_json::to_string_pretty(&report) {
            Ok(s) => {
                let _ = writeln!(out, "{s}");
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return 1;
            }
        }
        if let Outcome::Error { message, .. } = &report.outcome {
            let _ = writeln!(err, "error: {message}");
        }
    } else if code == 1 {
        let _ = write!(err, "{text}");
    } else {
        let _ = write!(out, "{text}");
    }
    code
}
