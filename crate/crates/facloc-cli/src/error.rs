use thiserror::Error;

/// CLI failure, split by exit code: usage/validation (2) and runtime (3).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl From<facloc::Error> for CliError {
    fn from(e: facloc::Error) -> Self {
        use facloc::Error::*;
        match e {
            OptimalSolverFailed { .. } | OracleDisagreement { .. } => CliError::Runtime(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}
