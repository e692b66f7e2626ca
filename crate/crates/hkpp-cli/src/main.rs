//! Batch experiment front-end for the `hkpp` front-dynamics laboratory.
//!
//! Subcommands: wave | simulate | front-fit | dipole | kernel | dichotomy |
//! sweep. Exit codes: 0 ok, 2 validation error, 3 numerical failure.

mod commands;
mod config;
mod csvout;
mod manifest;
mod plot;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    /// Bad input: config, flags, or preconditions. Exit code 2.
    Validation(String),
    /// Solver or estimator breakdown at runtime. Exit code 3.
    Numerical(String),
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        CliError::Numerical(msg.into())
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Validation(_) => ExitCode::from(2),
            CliError::Numerical(_) => ExitCode::from(3),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<hkpp::Error> for CliError {
    fn from(e: hkpp::Error) -> Self {
        use hkpp::Error::*;
        match e {
            // runtime breakdowns
            SeedFailure | NotNormalizable | IllConditionedFit | NumericalFailure { .. }
            | Overflow | NoFront | AmbiguousBeta | CoverageError => {
                CliError::Numerical(e.to_string())
            }
            // everything else is an input/precondition problem
            _ => CliError::Validation(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "hkpp", about = "Fisher-KPP front dynamics in hyperbolic space: batch experiments")]
struct Cli {
    /// Experiment config (TOML). Required by every subcommand except kernel.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for CSVs, plots, and the run manifest.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Worker threads for `sweep` fan-out.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Suppress progress output.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a traveling-wave profile and fit its tail.
    Wave,
    /// Integrate the reduced reaction-diffusion equation, writing snapshots.
    Simulate,
    /// Fit front position m(t) = a·t + b·log t + c (end-to-end or from a trace CSV).
    FrontFit,
    /// Evolve the self-similar half-line problem and track the dipole.
    Dipole,
    /// Tabulate the H^3 heat kernel against its two-sided envelope.
    Kernel {
        /// Kernel time.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Largest geodesic distance tabulated.
        #[arg(long = "r-max", default_value_t = 20.0)]
        r_max: f64,
        /// Number of grid points.
        #[arg(long, default_value_t = 401)]
        n: usize,
    },
    /// Classify propagation vs vanishing for a config.
    Dichotomy,
    /// Fan a config out over a parameter grid and concatenate results.
    Sweep,
}

fn require_config(cli: &Cli) -> Result<config::ExperimentConfig, CliError> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::validation("--config is required for this subcommand"))?;
    config::load(path)
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    std::fs::create_dir_all(&cli.out)
        .map_err(|e| CliError::validation(format!("cannot create {}: {e}", cli.out.display())))?;
    match &cli.command {
        Cmd::Wave => commands::cmd_wave(&require_config(cli)?, &cli.out, cli.quiet),
        Cmd::Simulate => commands::cmd_simulate(&require_config(cli)?, &cli.out, cli.quiet),
        Cmd::FrontFit => {
            commands::cmd_front_fit(&require_config(cli)?, &cli.out, cli.quiet, "run-0")
                .map(|_| ())
        }
        Cmd::Dipole => commands::cmd_dipole(&require_config(cli)?, &cli.out, cli.quiet),
        Cmd::Kernel { t, r_max, n } => commands::cmd_kernel(*t, *r_max, *n, &cli.out, cli.quiet),
        Cmd::Dichotomy => {
            commands::cmd_dichotomy(&require_config(cli)?, &cli.out, cli.quiet).map(|_| ())
        }
        Cmd::Sweep => commands::cmd_sweep(&require_config(cli)?, &cli.out, cli.quiet),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // ignore the error if a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
