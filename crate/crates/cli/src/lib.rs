//! Batch runner behind the `frame-forge` binary: configs in, reports out.

pub mod commands;
pub mod config;
pub mod presets;
pub mod report;
pub mod verify;

use std::fmt;

pub use config::{CommandName, ExperimentConfig, Format, InputSource, MethodFlag, PresetName};
pub use report::Report;

/// Exit codes of the binary.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Unreadable or invalid configuration or input.
    Config(String),
    /// A computation refused its input.
    Compute(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Compute(m) => write!(f, "computation error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Compute(_) => EXIT_COMPUTE,
        }
    }
}

/// The finished report text and the exit status it implies.
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

/// Runs one experiment. Configuration errors are returned; computation
/// errors become a report with status `error`.
pub fn run(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    match commands::execute(config) {
        Ok(report) => {
            let exit_code = if report.all_pass() { EXIT_OK } else { EXIT_INVARIANT };
            Ok(Outcome { report, exit_code })
        }
        Err(e @ CliError::Compute(_)) => Ok(Outcome { report: Report::failed(config, e.to_string()), exit_code: EXIT_COMPUTE }),
        Err(e) => Err(e),
    }
}

/// Writes the rendered report to the configured path, or returns it for stdout.
pub fn emit(outcome: &Outcome) -> Result<Option<String>, CliError> {
    let text = outcome.report.render();
    match &outcome.report.config.output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}
