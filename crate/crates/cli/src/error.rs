use std::fmt;

/// Failure of a CLI invocation, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, parameters or input data.
    Validation(String),
    /// An iterative method did not converge.
    NonConvergence(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::NonConvergence(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::NonConvergence(m) => write!(f, "did not converge: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<plapt::Error> for CliError {
    fn from(e: plapt::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::NonConvergence(e.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
