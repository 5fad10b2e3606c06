use orderflow_core::Error;

/// Command failures, each tied to one exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Consistency(String),
    #[error("{0}")]
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Input(_) => 1,
            CliError::Consistency(_) => 2,
            CliError::Cap(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => CliError::Cap(e.to_string()),
            Error::InternalVerificationFailed(_) | Error::NonFiniteObjective { .. } => {
                CliError::Consistency(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}
