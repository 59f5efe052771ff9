//! `qpm`: simulate scans, build joint spectra, fit crystals, decompose and
//! optimize from one config file per run.
//!
//! Exit status: 0 on success, 2 for configuration or input errors, 3 for
//! numerical or domain errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod output;
mod svg;

use config::{Format, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("cannot write output: {0}")]
    Output(String),
    #[error(transparent)]
    Core(#[from] qpm_core::Error),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Output(_) => 2,
            CliError::Core(e) if e.is_input_error() => 2,
            CliError::Core(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "qpm", version, about = "Quasi-phase-matched photon-pair source modelling")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration (JSON, or TOML by extension)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// RNG seed; required whenever counts are sampled
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory [default: out]
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output formats; repeat for several [default: csv, json, svg]
    #[arg(long, global = true, value_enum)]
    format: Vec<Format>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Two-laser SFG scan of the phase-matching function
    SimulateSfg,
    /// Single-laser wideband SHG sweep over several QPM processes
    SimulateShg,
    /// Joint spectral amplitude on a frequency grid
    BuildJsa,
    /// Fit crystal parameters to measured intensities
    Fit,
    /// Schmidt decomposition of the joint spectral amplitude
    Schmidt,
    /// Pump bandwidth maximizing spectral indistinguishability
    OptimizePump,
    /// Separation-error ratios
    ErrorModel,
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if cli.seed.is_some() {
        config.seed = cli.seed;
    }
    if let Some(out) = cli.out {
        config.out = Some(out);
    }
    if !cli.format.is_empty() {
        config.formats = Some(cli.format);
    }
    config.formats = Some(config.formats());
    let dir = config.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let outputs = match cli.command {
        Command::SimulateSfg => commands::simulate_sfg(config)?,
        Command::SimulateShg => commands::simulate_shg(config)?,
        Command::BuildJsa => commands::build_jsa_cmd(config)?,
        Command::Fit => commands::fit(config)?,
        Command::Schmidt => commands::schmidt(config)?,
        Command::OptimizePump => commands::optimize_pump(config)?,
        Command::ErrorModel => commands::error_model_cmd(config)?,
    };
    outputs.commit(&dir)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qpm: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
