//! Data plumbing for the `mcmpb` command-line tool: dataset files and fit
//! report documents.

pub mod dataset;
pub mod report;

use std::fmt;

/// Failure classes, each with its own process exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Data(String),
    NonConvergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Data(_) => 3,
            Self::NonConvergence(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "usage error: {m}"),
            Self::Data(m) => write!(f, "data error: {m}"),
            Self::NonConvergence(m) => write!(f, "fit failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<mcmpb_core::Error> for CliError {
    fn from(e: mcmpb_core::Error) -> Self {
        use mcmpb_core::Error as E;
        match e {
            E::InvalidParameter { .. } => Self::Usage(e.to_string()),
            E::NonConvergence { .. } | E::SingularCovariance { .. } | E::SeriesCap { .. } => {
                Self::NonConvergence(e.to_string())
            }
            _ => Self::Data(e.to_string()),
        }
    }
}

impl From<dataset::DatasetError> for CliError {
    fn from(e: dataset::DatasetError) -> Self {
        Self::Data(e.to_string())
    }
}
