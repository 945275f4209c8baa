use std::process::ExitCode;

use qcal_core::QError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("verification failed: {0}")]
    Failed(String),
    #[error("computation failed: {0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Failed(_) | CliError::Compute(_) => 1,
            CliError::Io(_) => 2,
            CliError::Usage(_) => 64,
        })
    }
}

impl From<QError> for CliError {
    fn from(e: QError) -> Self {
        match e {
            QError::InvalidParameter(_) | QError::Domain(_) | QError::Range { .. } => {
                CliError::Usage(e.to_string())
            }
            QError::Io(_) | QError::Csv(_) | QError::Json(_) | QError::Shape(_) => {
                CliError::Io(e.to_string())
            }
            _ => CliError::Compute(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
