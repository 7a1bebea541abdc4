//! Error type for the command-line layer, carrying the process exit code:
//! 1 validation failure, 2 configuration or I/O error, 3 numeric failure.

use fdnet::model::ModelError;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The spec file, a flag, or a derived parameter is unusable.
    #[error("configuration error: {0}")]
    Config(String),
    /// A file could not be read or written.
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// Quadrature or root bracketing failed to converge.
    #[error("numeric failure: {0}")]
    Numeric(ModelError),
    /// Analytic values missed more Monte Carlo intervals than the budget.
    #[error("validation failed: {0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::InvalidParameter { .. } => CliError::Config(e.to_string()),
            other => CliError::Numeric(other),
        }
    }
}
