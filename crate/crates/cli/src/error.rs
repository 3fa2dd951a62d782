use std::fmt;
use std::process::ExitCode;

use bell_core::BellError;

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or an inconsistent configuration (exit 1).
    Usage(String),
    /// Malformed or inconsistent input data (exit 2).
    Data(String),
    /// An invariant that cannot fail on valid input did (exit 3).
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(1),
            CliError::Data(_) => ExitCode::from(2),
            CliError::Internal(_) => ExitCode::from(3),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<BellError> for CliError {
    fn from(e: BellError) -> Self {
        let msg = e.to_string();
        match e {
            BellError::LengthMismatch { .. }
            | BellError::EmptyStream
            | BellError::InvalidOutcome(_)
            | BellError::DuplicateLabel(_)
            | BellError::NoSupport { .. }
            | BellError::Parse(_) => CliError::Data(msg),
            BellError::Domain { .. }
            | BellError::Range { .. }
            | BellError::Usage(_)
            | BellError::Config(_)
            | BellError::Unsupported(_) => CliError::Usage(msg),
            BellError::Invariant(_) => CliError::Internal(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
