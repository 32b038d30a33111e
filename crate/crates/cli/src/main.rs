//! `pseudospec`: derived parameters, spectra, verification, table audit and
//! admissibility scans for the generalized Swanson models.
//!
//! Exit codes: 0 success, 1 I/O, 2 usage or config, 3 constraint violated,
//! 4 solver failure, 5 verification failed.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{RunArgs, ScanArgs, SpectrumArgs};
use config::{FileConfig, OutputArgs};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "pseudospec", version, about = "Generalized Swanson models: spectra and verification")]
struct Cli {
    /// JSON config file; flags take precedence over its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Derived parameters, constraint flags and analytic levels.
    Derive(RunArgs),
    /// Analytic against numeric spectrum of the partner Hamiltonian.
    Spectrum(SpectrumArgs),
    /// Full operator-level verification with a JSON report.
    Verify(RunArgs),
    /// Recompute every derived cell of the printed parameter tables.
    TableAudit(OutputArgs),
    /// Constraint raster over (alpha, beta).
    Scan(ScanArgs),
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    match &cli.command {
        Command::Derive(a) => commands::derive_cmd(a, &file),
        Command::Spectrum(a) => commands::spectrum_cmd(a, &file),
        Command::Verify(a) => commands::verify_cmd(a, &file),
        Command::TableAudit(a) => commands::table_audit_cmd(a, &file),
        Command::Scan(a) => commands::scan_cmd(a, &file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
