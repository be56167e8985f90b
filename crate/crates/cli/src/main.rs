use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use frame_forge_cli::config::{CommandName, ExperimentConfig, Format, InputSource, MethodFlag, PresetName};
use frame_forge_cli::presets::parse_paire;
use frame_forge_cli::{emit, run, CliError};

#[derive(Parser)]
#[command(name = "frame-forge", version, about = "Schauder frame and besselian constant experiments")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reconstruction check x = sum b_n*(x) a_n.
    Check(Common),
    /// Frame constant max_n |S_n|.
    Constant(Common),
    /// Besselian constant with certificate.
    Besselian(Common),
    /// Build a frame and report it.
    Construct(Common),
    /// Z_E / W_E embeddings.
    Embed {
        #[command(flatten)]
        common: Common,
        /// Check the embedding sandwiches, rho and basis monotonicity.
        #[arg(long)]
        check_sandwich: bool,
    },
    /// Besselian growth of the Haar system on discretized L_1.
    Haar {
        #[command(flatten)]
        common: Common,
    },
    /// Run the invariant suites.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Only suites whose name contains this text.
        #[arg(long)]
        filter: Option<String>,
        /// Add a copy of the last paire with every functional doubled.
        #[arg(long)]
        inject_corruption: bool,
    },
    /// Run an experiment described by a JSON config file.
    Run { config: PathBuf },
}

#[derive(Args)]
struct Common {
    /// Named input paire.
    #[arg(long, value_enum, conflicts_with_all = ["input", "inline"])]
    preset: Option<PresetName>,
    /// Preset dimension.
    #[arg(long)]
    n: Option<usize>,
    /// Preset exponent for canonical_lp.
    #[arg(long)]
    p: Option<f64>,
    /// Preset Haar level, or the highest level for `haar`.
    #[arg(long)]
    level: Option<u32>,
    /// Paire JSON file.
    #[arg(long, conflicts_with = "inline")]
    input: Option<PathBuf>,
    /// Paire JSON given on the command line.
    #[arg(long)]
    inline: Option<String>,
    #[arg(long, value_enum)]
    method: Option<MethodFlag>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random probes or trials per check.
    #[arg(long, default_value_t = 100)]
    probes: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl Common {
    fn into_config(self, command: CommandName) -> Result<ExperimentConfig, CliError> {
        let mut cfg = ExperimentConfig::new(command);
        cfg.input = if let Some(name) = self.preset {
            let level = if command == CommandName::Haar { None } else { self.level };
            Some(InputSource::Preset { name, n: self.n, p: self.p, level })
        } else if let Some(path) = self.input {
            Some(InputSource::File { path })
        } else if let Some(text) = self.inline {
            Some(InputSource::Inline { paire: parse_paire(&text)? })
        } else {
            None
        };
        if command == CommandName::Haar {
            cfg.max_level = self.level;
        }
        cfg.method = self.method;
        cfg.tolerance = self.tol;
        cfg.seed = self.seed;
        cfg.probes = self.probes;
        cfg.format = self.format;
        cfg.output = self.output;
        Ok(cfg)
    }
}

fn config_from(cli: Cli) -> Result<ExperimentConfig, CliError> {
    match cli.command {
        Cmd::Check(c) => c.into_config(CommandName::Check),
        Cmd::Constant(c) => c.into_config(CommandName::Constant),
        Cmd::Besselian(c) => c.into_config(CommandName::Besselian),
        Cmd::Construct(c) => c.into_config(CommandName::Construct),
        Cmd::Embed { common, check_sandwich } => {
            let mut cfg = common.into_config(CommandName::Embed)?;
            cfg.check_sandwich = check_sandwich;
            Ok(cfg)
        }
        Cmd::Haar { common } => common.into_config(CommandName::Haar),
        Cmd::Verify { common, filter, inject_corruption } => {
            let mut cfg = common.into_config(CommandName::Verify)?;
            cfg.filter = filter;
            cfg.inject_corruption = inject_corruption;
            Ok(cfg)
        }
        Cmd::Run { config } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", config.display())))?;
            ExperimentConfig::from_json(&text)
        }
    }
}

fn init_threads() {
    if let Some(n) = std::env::var("FRAME_FORGE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("could not size the thread pool: {e}");
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    init_threads();
    let cli = Cli::parse();
    let result = config_from(cli).and_then(|cfg| {
        let outcome = run(&cfg)?;
        if let Some(e) = &outcome.report.error {
            eprintln!("frame-forge: {e}");
        }
        if let Some(text) = emit(&outcome)? {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
        }
        Ok(outcome.exit_code)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("frame-forge: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
