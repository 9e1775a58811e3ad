//! Command-line workbench for the `distmatch` solvers: instance generation,
//! exact and approximate solves, integrality gaps, ordering experiments and
//! benchmark sweeps, all with machine-readable reports.
//!
//! Exit codes: 0 on success, 2 for bad input, 3 when an algorithm's
//! precondition does not hold for the given instance.

pub mod commands;
pub mod format;
pub mod report;

use thiserror::Error;

pub use commands::{run, Cli};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::BadInput(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}
