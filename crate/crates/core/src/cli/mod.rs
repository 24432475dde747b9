//! Command-line front end: config in, JSON or CSV artifact out.

pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::Parser;
use thiserror::Error;

pub use config::{validate, Command, Diagnostic, Format, RunConfig};

use crate::analyzer;
use crate::error::Error;
use crate::game::{self, PayoffMatrix};
use crate::replicator;
use crate::scanner;
use crate::state::StateWeights;
use crate::transform;
use config::GameForm;

#[derive(Debug, Clone, Parser)]
#[command(name = "qess", version, about = "Stability of mixed equilibria in quantized symmetric games")]
pub struct Args {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; overrides `output.path`. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format; overrides `output.format`.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Exit with status 1 when an equilibrium computation is degenerate.
    #[arg(long)]
    pub strict_degenerate: bool,
    /// Recorded in output metadata. The pipeline itself is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub format: Option<Format>,
    pub strict_degenerate: bool,
    pub seed: Option<u64>,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid configuration")]
    Config(Vec<Diagnostic>),
    #[error("degenerate game: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("{0} output is not available for {1}")]
    UnsupportedFormat(&'static str, &'static str),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::UnsupportedFormat(..) => 2,
            _ => 1,
        }
    }
}

/// Runs a validated config and returns the serialized artifact.
pub fn execute(cfg: &RunConfig, opts: &RunOptions) -> Result<Vec<u8>, RunError> {
    let format = opts
        .format
        .or_else(|| cfg.output.as_ref().and_then(|o| o.format))
        .unwrap_or_else(|| cfg.command.default_format());
    let meta = output::Meta::new(cfg.command, opts.seed);

    match cfg.command {
        Command::Analyze => {
            let weights = cfg.weights.as_ref().expect("validated");
            let report = analyzer::analyze(&cfg.alpha, weights)?;
            if opts.strict_degenerate && report.is_degenerate() {
                return Err(RunError::Degenerate("mixed equilibrium denominator is zero".into()));
            }
            match format {
                Format::Json => Ok(output::json(&meta, &report)),
                Format::Csv => Err(RunError::UnsupportedFormat("csv", "analyze")),
            }
        }
        Command::Transform => {
            let weights = cfg.weights.as_ref().expect("validated");
            let ops = cfg.operators();
            let omega = transform::transform(&cfg.alpha, weights, &ops)?;
            Ok(match format {
                Format::Json => output::json(&meta, &output::TransformResult { operator_set: ops, omega }),
                Format::Csv => output::transform_csv(&omega),
            })
        }
        Command::Simulate => {
            let dyn_cfg = cfg.dynamics.as_ref().expect("validated");
            let matrix = dynamics_matrix(cfg, dyn_cfg.game)?;
            let x0 = dyn_cfg.x0.as_ref().expect("validated");
            let trajectory = replicator::simulate(x0, &matrix, dyn_cfg.dt, dyn_cfg.steps)?;
            let classification = match matrix.dim() {
                2 => match game::find_mixed_ne_2x2(&matrix)? {
                    game::MixedNe::Isolated(x) => replicator::classify_stability(&matrix, x, &dyn_cfg.params()).ok(),
                    game::MixedNe::Degenerate if opts.strict_degenerate => {
                        return Err(RunError::Degenerate("dynamics matrix has no isolated mixed equilibrium".into()))
                    }
                    _ => None,
                },
                _ => None,
            };
            Ok(match format {
                Format::Json => output::json(&meta, &output::SimulateResult { trajectory, classification }),
                Format::Csv => output::trajectory_csv(&trajectory),
            })
        }
        Command::Scan => {
            let scan_cfg = cfg.scan.clone().unwrap_or_default();
            let grid = scanner::scan(&cfg.alpha, scan_cfg.resolution, scan_cfg.constraint)?;
            if opts.strict_degenerate && grid.points.iter().any(|p| p.report.is_degenerate()) {
                return Err(RunError::Degenerate("scan contains degenerate grid points".into()));
            }
            Ok(match format {
                Format::Json => output::json(&meta, &output::ScanResult::new(&grid)?),
                Format::Csv => output::scan_csv(&grid),
            })
        }
    }
}

fn dynamics_matrix(cfg: &RunConfig, form: Option<GameForm>) -> Result<PayoffMatrix, RunError> {
    let form = form.unwrap_or(if cfg.weights.is_some() { GameForm::Quantum } else { GameForm::Classical });
    match form {
        GameForm::Classical => Ok(cfg.alpha.clone()),
        GameForm::Quantum => {
            let weights: &StateWeights = cfg.weights.as_ref().expect("validated");
            Ok(transform::transform(&cfg.alpha, weights, &cfg.operators())?.to_game()?)
        }
    }
}

/// Entry point shared by the binary and the tests. Returns the exit status.
pub fn run(args: &Args) -> i32 {
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: config: cannot read {}: {e}", args.config.display());
            return 2;
        }
    };
    let cfg = match validate(&text) {
        Ok(cfg) => cfg,
        Err(diags) => {
            for d in &diags {
                eprintln!("error: {d}");
            }
            return 2;
        }
    };
    let opts = RunOptions { format: args.format, strict_degenerate: args.strict_degenerate, seed: args.seed };
    let bytes = match execute(&cfg, &opts) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let out = args.out.clone().or_else(|| cfg.output.as_ref().and_then(|o| o.path.as_ref().map(PathBuf::from)));
    let written = match &out {
        Some(path) => std::fs::write(path, &bytes)
            .map_err(|source| RunError::Io { path: path.display().to_string(), source }),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|source| RunError::Io { path: "stdout".into(), source })
        }
    };
    match written {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
