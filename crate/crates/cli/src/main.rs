//! `minlen`: bound states of one-dimensional potentials with a minimal length.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::SweepOptions;
use crate::config::{RunConfig, Settings};

/// Failure classes and their exit codes.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Solver(minlen_core::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Solver(e) => write!(f, "solver failure: {e}"),
        }
    }
}

impl From<minlen_core::Error> for CliError {
    fn from(e: minlen_core::Error) -> Self {
        CliError::Solver(e)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "minlen",
    version,
    about = "Bound states in deformed space with a minimal length"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form levels.
    Solve(RunArgs),
    /// Nyström eigensolver alongside the closed forms.
    Oracle(RunArgs),
    /// Closed-form (or oracle) levels over a one-parameter range.
    Sweep(SweepArgs),
    /// Run the self-consistency checks; exit 1 if any fails.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    settings: Settings,
    /// Flat JSON file with the same keys as the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Leave the timestamp and wall time out of the output.
    #[arg(long)]
    no_timestamp: bool,
}

impl RunArgs {
    fn merged(&self) -> Result<Settings, CliError> {
        let file = match &self.config {
            Some(path) => Settings::from_file(path)?,
            None => Settings::default(),
        };
        Ok(self.settings.clone().over(file))
    }
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// NAME:FROM:TO:POINTS[:log] with NAME one of beta, u0, a, alpha, A.
    #[arg(long, required = true, allow_hyphen_values = true)]
    range: Vec<String>,
    /// Fit the lowest level as a polynomial in √β.
    #[arg(long)]
    fit: bool,
    /// Cross-check every point with the oracle.
    #[arg(long)]
    oracle: bool,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Fast subset of the checks.
    #[arg(long)]
    quick: bool,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Solve(args) => {
            let cfg = RunConfig::from_settings(&args.merged()?)?;
            commands::run_single(&cfg, false, !args.no_timestamp)?;
        }
        Command::Oracle(args) => {
            let cfg = RunConfig::from_settings(&args.merged()?)?;
            commands::run_single(&cfg, true, !args.no_timestamp)?;
        }
        Command::Sweep(args) => {
            let opts = SweepOptions {
                fit: args.fit,
                with_oracle: args.oracle,
                stamp: !args.run.no_timestamp,
            };
            commands::run_sweep(&args.run.merged()?, &args.range, &opts)?;
        }
        Command::Validate(args) => {
            return Ok(commands::run_validate(args.quick, args.inject_fault))
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("minlen: {e}");
            ExitCode::from(e.code())
        }
    }
}
