//! `spreadlab`: batch runner for the spreadlab experiments.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::Duration;

use clap::{Parser, Subcommand};
use spreadlab_core::LabError;
use thiserror::Error;

use crate::output::Artifacts;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("time limit of {0}s exceeded")]
    TimeLimit(f64),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Lab(#[from] LabError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::TimeLimit(_) => 3,
            CliError::Failed(_) => 4,
            CliError::Lab(e) => match e {
                LabError::Parameter(_) | LabError::DimensionMismatch { .. } | LabError::CompositeModulus(_) => 2,
                LabError::SearchOverflow(_) | LabError::Deadline(_) => 3,
                LabError::Invariant(_) => 4,
                _ => 1,
            },
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "spreadlab", version, about = "Spread Furstenberg set experiments")]
struct Cli {
    /// JSON config for the subcommand.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Seed for every random draw; overrides the config's `seed`.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Output directory; overrides the config's `out`. Reports go to stdout without one.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Closed-form dimension bounds.
    Bounds {
        #[command(subcommand)]
        action: BoundsAction,
    },
    /// Randomised checks of the Grassmannian distance inequalities.
    Grassmann {
        #[command(subcommand)]
        action: GrassmannAction,
    },
    /// Point-hyperplane duality and the projective spreading map.
    Duality {
        #[command(subcommand)]
        action: DualityAction,
    },
    /// Box-counting dimension of grid sets and point clouds.
    Dimension {
        #[command(subcommand)]
        action: DimensionAction,
    },
    /// Finite-field Kakeya and spread Furstenberg sets.
    Ff {
        #[command(subcommand)]
        action: FfAction,
    },
    /// Discretized Kakeya maximal function.
    Maximal {
        #[command(subcommand)]
        action: MaximalAction,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum BoundsAction {
    /// Evaluate every bound over a parameter grid.
    Eval,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum GrassmannAction {
    /// Run the property suites and the ball-measure scaling check.
    Verify,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum DualityAction {
    /// Map a point set and hyperplane family to a spread configuration.
    Spreadify,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum DimensionAction {
    /// Estimate the dimension of a grid or point cloud read from a file.
    Estimate,
    /// Build a test set and estimate its dimension.
    Construct,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum FfAction {
    /// Check Kakeya, pigeonhole and spread properties of a set.
    Verify,
    /// Find a smallest Kakeya or spread Furstenberg set.
    Search,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum MaximalAction {
    /// Tabulate the maximal L^p norm against delta.
    Scan,
}

/// Everything a subcommand needs besides its own parameters.
pub struct Ctx {
    pub seed: u64,
    pub config_dir: Option<PathBuf>,
}

type Job = Box<dyn FnOnce() -> Result<Artifacts, CliError> + Send>;

/// A parsed subcommand ready to run.
struct Prepared {
    out: Option<PathBuf>,
    time_limit: Option<f64>,
    job: Job,
}

fn dispatch(cmd: Command, cli: &Cli) -> Result<Prepared, CliError> {
    macro_rules! prepare {
        ($run:path) => {{
            let loaded = config::load(cli.config.as_deref())?;
            let ctx = Ctx {
                seed: cli.seed.or(loaded.common.seed).unwrap_or(0),
                config_dir: cli.config.as_ref().and_then(|p| p.parent().map(PathBuf::from)),
            };
            let out = cli.out.clone().or(loaded.common.out);
            let params = loaded.params;
            Ok(Prepared {
                out,
                time_limit: loaded.common.time_limit,
                job: Box::new(move || $run(params, &ctx)),
            })
        }};
    }
    match cmd {
        Command::Bounds { action: BoundsAction::Eval } => prepare!(commands::bounds::eval),
        Command::Grassmann { action: GrassmannAction::Verify } => prepare!(commands::grassmann::verify),
        Command::Duality { action: DualityAction::Spreadify } => prepare!(commands::duality::spreadify),
        Command::Dimension { action: DimensionAction::Estimate } => prepare!(commands::dimension::estimate),
        Command::Dimension { action: DimensionAction::Construct } => prepare!(commands::dimension::construct),
        Command::Ff { action: FfAction::Verify } => prepare!(commands::ff::verify),
        Command::Ff { action: FfAction::Search } => prepare!(commands::ff::search),
        Command::Maximal { action: MaximalAction::Scan } => prepare!(commands::maximal::scan),
    }
}

fn run_with_limit<F>(job: F, limit: Option<f64>) -> Result<Artifacts, CliError>
where
    F: FnOnce() -> Result<Artifacts, CliError> + Send + 'static,
{
    let Some(secs) = limit else {
        return job();
    };
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(job());
    });
    rx.recv_timeout(Duration::from_secs_f64(secs))
        .map_err(|_| CliError::TimeLimit(secs))?
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let Prepared { out, time_limit, job } = dispatch(cli.command, cli)?;
    let artifacts = run_with_limit(job, time_limit)?;
    match &out {
        Some(dir) => {
            artifacts.write_to(dir)?;
            if let Some(summary) = &artifacts.summary {
                print!("{summary}");
            }
        }
        None => artifacts.write_report(std::io::stdout().lock())?,
    }
    match artifacts.failure {
        Some(msg) => Err(CliError::Failed(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spreadlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
