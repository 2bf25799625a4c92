use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI command, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, bad formula text or bad semantics parameters (exit 1).
    #[error("{0}")]
    Usage(String),

    /// Unreadable or inconsistent input data (exit 2).
    #[error("{0}")]
    Data(String),

    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::Io { .. } | CliError::Output(_) => 2,
        }
    }
}

impl From<stlrob::Error> for CliError {
    fn from(e: stlrob::Error) -> Self {
        use stlrob::Error as E;
        match e {
            E::Parse(p) => CliError::Usage(format!("parse error at {p}")),
            E::InvalidParameter(_) | E::UnknownSemantics(_) => CliError::Usage(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
