use std::path::PathBuf;

use frame_forge::Paire;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CommandName {
    Check,
    Constant,
    Besselian,
    Construct,
    Embed,
    Haar,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum PresetName {
    CanonicalL1,
    CanonicalLp,
    CanonicalC0,
    Mercedes,
    Haar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MethodFlag {
    Exact,
    Bounds,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Where the paire comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InputSource {
    Preset {
        name: PresetName,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        level: Option<u32>,
    },
    File {
        path: PathBuf,
    },
    Inline {
        paire: Paire,
    },
}

fn default_tolerance() -> f64 {
    1e-9
}

fn default_probes() -> usize {
    100
}

/// Everything that determines a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: CommandName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodFlag>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub seed: u64,
    /// Random probes or trials per check.
    #[serde(default = "default_probes")]
    pub probes: usize,
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Highest Haar level for the `haar` command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_level: Option<u32>,
    #[serde(default)]
    pub check_sandwich: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter: Option<String>,
    #[serde(default)]
    pub inject_corruption: bool,
}

impl ExperimentConfig {
    pub fn new(command: CommandName) -> Self {
        ExperimentConfig {
            command,
            input: None,
            method: None,
            tolerance: default_tolerance(),
            seed: 0,
            probes: default_probes(),
            format: Format::Json,
            output: None,
            max_level: None,
            check_sandwich: false,
            filter: None,
            inject_corruption: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(CliError::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if let Some(InputSource::Preset { p: Some(p), .. }) = &self.input {
            if !(p.is_finite() && *p >= 1.0) {
                return Err(CliError::Config(format!("preset exponent must be finite and >= 1, got {p}")));
            }
        }
        let needs_input = !matches!(self.command, CommandName::Haar | CommandName::Verify);
        if needs_input && self.input.is_none() {
            return Err(CliError::Config("an input paire is required (--preset, --input or --inline)".into()));
        }
        Ok(())
    }
}
