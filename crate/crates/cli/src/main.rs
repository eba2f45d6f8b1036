//! `coherence-ledger`: coherence and discord measures, the controlled-Z
//! preparation series, the Werner and one-clean-qubit demos, and the
//! randomized bound verifiers.
//!
//! Exit status is 0 on success, 1 for usage, input and parameter errors, and
//! 2 when a computed bound or internal invariant is violated.

mod commands;
mod files;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const SEED_ENV: &str = "COHERENCE_LEDGER_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "coherence-ledger",
    version,
    about = "Coherence and discord bookkeeping for small quantum systems"
)]
pub struct Cli {
    /// Print the result payload as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write a report file (command, seed, config, payload, version).
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Relative entropy of coherence in the computational or a supplied basis.
    Coh(CohArgs),
    /// Minimized discord of a state.
    Discord(DiscordArgs),
    /// Discord against coherence consumption along the controlled-Z preparation.
    Stateprep(StatePrepArgs),
    /// Discord without entanglement from a noisy CNOT.
    Werner(WernerArgs),
    /// One-clean-qubit trace estimation and its discord bounds.
    Dqc1(Dqc1Args),
    /// Randomized check of one conversion bound.
    Verify(VerifyArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CohArgs {
    #[arg(long, value_name = "FILE")]
    pub state: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub basis: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscordMode {
    Global,
    Asym,
    Relent,
}

#[derive(Debug, Args, Serialize)]
pub struct DiscordArgs {
    #[arg(long, value_name = "FILE")]
    pub state: PathBuf,
    #[arg(long, value_enum)]
    pub mode: DiscordMode,
    /// Measured subsystems for `--mode asym`, comma separated.
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    pub a_indices: Option<Vec<usize>>,
    /// Number of refined starting points.
    #[arg(long, value_name = "N")]
    pub starts: Option<usize>,
    /// Grid points per angle of the coarse search.
    #[arg(long, value_name = "N")]
    pub grid: Option<usize>,
    #[arg(long, value_name = "S")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesFormat {
    Csv,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct StatePrepArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    /// Radians.
    #[arg(long)]
    pub theta: f64,
    /// Last gate count to report (default n - 1).
    #[arg(long, value_name = "L")]
    pub upto: Option<usize>,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: SeriesFormat,
    #[arg(long, value_name = "S")]
    pub seed: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct WernerArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long, value_name = "S")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedUnitary {
    Identity,
    /// Pauli Z on every register qubit.
    Sigmaz,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("unitary_source").required(true).multiple(false)))]
pub struct Dqc1Args {
    /// Register qubits.
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_name = "FILE", group = "unitary_source")]
    pub unitary: Option<PathBuf>,
    /// JSON list of 2^n phases in radians.
    #[arg(long, value_name = "FILE", group = "unitary_source")]
    pub diag_phases: Option<PathBuf>,
    #[arg(long, value_enum, group = "unitary_source")]
    pub named: Option<NamedUnitary>,
    #[arg(long, value_name = "S")]
    pub seed: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub result: u8,
    #[arg(long, value_name = "T")]
    pub trials: usize,
    #[arg(long, value_name = "S")]
    pub seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match commands::run(&cli, argv) {
        Ok(commands::Outcome::Ok) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Violation(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
