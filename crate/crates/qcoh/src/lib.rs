//! File formats, parameter sweeps and verification suites on top of
//! `qcoh-core`, plus the `qcoh` command-line tool.

// `!(x <= y)` also rejects NaN, which is the point
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel_json;
pub mod compute;
pub mod sweep;
pub mod verify;

use qcoh_core::Error as CoreError;

/// Failures of a command, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed arguments, unreadable or invalid channel files, unwritable
    /// outputs.
    #[error("{0}")]
    Input(String),
    /// `(alpha, z)` outside the known regimes without the override flag.
    #[error("{0}")]
    Regime(String),
    /// A verification suite found at least one failing check.
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) => 2,
            CliError::Regime(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidRegime { .. } => CliError::Regime(format!("{e}; pass --allow-outside-regime to compute anyway")),
            other => CliError::Input(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
