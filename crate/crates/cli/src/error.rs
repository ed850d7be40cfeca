use std::path::PathBuf;

use gvf_core::GvfError;
use thiserror::Error;

/// Exit code contract of the `gvf` binary.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const CLAIMS_FAILED: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const ABORT: u8 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{file}:{line}:{column}: {message}")]
    Parse {
        file: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Input(String),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("simulation aborted: {0}")]
    Abort(String),
    #[error("{failed} of {total} claims failed")]
    ClaimsFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } | CliError::Input(_) | CliError::Read { .. } => exit::INPUT,
            CliError::Write { .. } | CliError::Abort(_) => exit::ABORT,
            CliError::ClaimsFailed { .. } => exit::CLAIMS_FAILED,
        }
    }
}

impl From<GvfError> for CliError {
    fn from(e: GvfError) -> Self {
        match e {
            GvfError::SingularHeading { .. } | GvfError::StalledTrajectory { .. } | GvfError::Contract(_) => {
                CliError::Abort(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
