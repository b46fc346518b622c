//! Batch driver around the `relaxsim` library: run time sweeps of the
//! relaxation models, emit CSV/JSON time series, compare models against each
//! other, scan for entanglement sudden death, and dump channel/circuit
//! internals for inspection.

pub mod config;
pub mod dump;
pub mod report;
pub mod sweep;

pub use config::{FileConfig, Model, OutputFormat, SweepConfig};
pub use report::{compare_report, sudden_death_scan, CompareReport, SuddenDeathOutcome};
pub use sweep::{load_records, run_sweep, write_records, SweepRecord};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{0}")]
    Lib(#[from] relaxsim::Error),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },

    #[error("records do not share a time grid: {0}")]
    GridMismatch(String),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
