use thiserror::Error;

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("numeric failure: {0}")]
    Numeric(radcomp::Error),
    #[error("{failed} of {total} criteria failed")]
    Verification { failed: usize, total: usize },
}

impl From<radcomp::Error> for CliError {
    fn from(e: radcomp::Error) -> Self {
        match e {
            // Bad inputs that slipped past the config layer are still usage errors.
            radcomp::Error::Validation { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numeric(other),
        }
    }
}

impl CliError {
    /// 0 success, 1 verification failure, 2 usage or config, 3 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification { .. } => 1,
            CliError::Usage(_) | CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}
