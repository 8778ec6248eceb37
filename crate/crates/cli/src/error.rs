//! CLI error taxonomy mapped to process exit codes.

use lase_kk_core::CoreError;

/// Exit code 2: bad flags, configuration or input data.
/// Exit code 3: a numerical routine refused or failed.
/// Exit code 1: I/O trouble.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidInput(_) => CliError::Validation(e.to_string()),
            CoreError::NonConvergence(_)
            | CoreError::PoleOnRealAxis
            | CoreError::SingularSystem
            | CoreError::EdgeEvaluation(_)
            | CoreError::BadTailFit { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
