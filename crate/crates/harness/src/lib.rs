//! Monte-Carlo BER experiments for eBCH product and staircase codes.
//!
//! [`config::ExperimentConfig`] describes a sweep, [`sim::Runner`] simulates
//! it with seeded, worker-count independent parallelism, [`output`] writes
//! plot-ready tables with a metadata sidecar and [`gain`] compares curves.

pub mod config;
pub mod gain;
pub mod output;
pub mod sim;
pub mod validate;

use std::path::Path;

use thiserror::Error;

pub use config::ExperimentConfig;
pub use gain::measure_gain;
pub use sim::{run_point, BerRecord, Runner};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("gain measurement: {0}")]
    Gain(String),
    #[error("every operating point was censored by the bit budget")]
    AllCensored,
    #[error("self-checks failed")]
    Validation,
}

impl HarnessError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Validation => 1,
            HarnessError::Config(_) => 2,
            HarnessError::AllCensored => 3,
            HarnessError::Io(_) => 4,
            HarnessError::Gain(_) => 5,
        }
    }
}

/// Result of [`run_sweep`].
#[derive(Debug)]
pub struct SweepOutcome {
    pub records: Vec<BerRecord>,
    pub files: output::OutputFiles,
}

/// Runs every point of `config` and writes `<name>.txt`, `<name>.meta.json`
/// and, if needed, `<name>.censored.txt` into `out_dir`.
pub fn run_sweep(config: &ExperimentConfig, out_dir: &Path, name: &str) -> Result<SweepOutcome, HarnessError> {
    let runner = Runner::new(config.clone())?;
    let records = runner.run_all()?;
    let files = output::write_outputs(out_dir, name, config, runner.rate(), &records)?;
    Ok(SweepOutcome { records, files })
}
