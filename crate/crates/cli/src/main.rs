//! `linrel`: verification suites, the multivalued Jacobi example, spectral
//! sweeps and spectra of relation files.
//!
//! Exit status: 0 when every check passed, 1 when a mathematical check
//! failed, 2 on usage or configuration errors.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::config::{Flags, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Math(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Math(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

impl From<linrel::Error> for CliError {
    fn from(e: linrel::Error) -> Self {
        use linrel::Error as E;
        match e {
            E::InvalidInput(_)
            | E::InvalidParams(_)
            | E::RankTooLarge { .. }
            | E::DimensionMismatch { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Math(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "linrel",
    version,
    about = "Linear relations on C^n: verifiers, examples and sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every perturbation verifier on seeded models and write the verdicts.
    Verify(Flags),
    /// Operator part of the multivalued Jacobi example and the naive-sum gap.
    Example31(Flags),
    /// Counting-function sweep of a perturbed Jacobi relation.
    Sweep(Flags),
    /// Eigenvalues of a self-adjoint relation read from a relation or model file.
    Spectrum {
        relation_file: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
}

fn run(cli: Cli) -> commands::Outcome {
    let flags = match &cli.command {
        Command::Verify(f) | Command::Example31(f) | Command::Sweep(f) => f,
        Command::Spectrum { flags, .. } => flags,
    };
    let cfg = RunConfig::resolve(flags)?;
    let go = || match &cli.command {
        Command::Verify(_) => commands::verify(&cfg),
        Command::Example31(_) => commands::example31(&cfg),
        Command::Sweep(_) => commands::sweep_cmd(&cfg),
        Command::Spectrum { relation_file, .. } => commands::spectrum(&cfg, relation_file),
    };
    match cfg.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?
            .install(go),
        None => go(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
