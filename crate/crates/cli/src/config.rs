//! Run configuration: a JSON file merged under command-line flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use linrel::models::JacobiParams;
use linrel::sweep::Coefficients;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every subcommand. Each one overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON config file; flags given on the command line take precedence.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Space dimensions for `verify`, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub dims: Option<Vec<usize>>,
    /// Truncation sizes for `example31` and `sweep`, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub sizes: Option<Vec<usize>>,
    /// Rank of generated perturbations.
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long = "tol-residual")]
    pub tol_residual: Option<f64>,
    /// Output file (a directory for `sweep`); stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceFile {
    pub rank_rel_tol: Option<f64>,
    pub angle_tol: Option<f64>,
    pub residual_tol: Option<f64>,
}

/// Contents of `--config`; every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub dims: Option<Vec<usize>>,
    pub sizes: Option<Vec<usize>>,
    pub rank: Option<usize>,
    pub instances: Option<usize>,
    pub tolerances: Option<ToleranceFile>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
    pub delta: Option<f64>,
    pub bulk_interval: Option<[f64; 2]>,
    pub coefficients: Option<Coefficients>,
    /// Explicit coefficients for `example31`, replacing `sizes`.
    pub jacobi: Option<JacobiParams>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub dims: Option<Vec<usize>>,
    pub sizes: Option<Vec<usize>>,
    pub rank: Option<usize>,
    pub instances: usize,
    pub tolerance: linrel::Tolerance64,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
    pub delta: Option<f64>,
    pub bulk_interval: Option<[f64; 2]>,
    pub coefficients: Option<Coefficients>,
    pub jacobi: Option<JacobiParams>,
}

impl RunConfig {
    pub fn resolve(flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let tf = file.tolerances.unwrap_or_default();
        let defaults = linrel::Tolerance64::default();
        let tolerance = linrel::Tolerance64::new(
            tf.rank_rel_tol.unwrap_or(defaults.rank_rel_tol),
            tf.angle_tol.unwrap_or(defaults.angle_tol),
            flags
                .tol_residual
                .or(tf.residual_tol)
                .unwrap_or(defaults.residual_tol),
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;
        let instances = file.instances.unwrap_or(3);
        if instances == 0 {
            return Err(CliError::Usage("instances must be positive".into()));
        }
        let threads = flags.threads.or(file.threads);
        if threads == Some(0) {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        Ok(Self {
            seed: flags.seed.or(file.seed).unwrap_or(0),
            dims: flags.dims.clone().or(file.dims),
            sizes: flags.sizes.clone().or(file.sizes),
            rank: flags.rank.or(file.rank),
            instances,
            tolerance,
            out: flags.out.clone().or(file.out),
            format: flags.format.or(file.format),
            threads,
            delta: file.delta,
            bulk_interval: file.bulk_interval,
            coefficients: file.coefficients,
            jacobi: file.jacobi,
        })
    }
}
