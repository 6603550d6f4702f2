use std::fmt;

use micromaser_core::Error as CoreError;

/// Process exit codes: 0 success, 2 config error, 3 physics inconsistency,
/// 4 numerical-integrity abort. I/O failures exit 1.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Physics(String),
    Integrity(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Physics(_) => 3,
            CliError::Integrity(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Physics(msg) => write!(f, "physics inconsistency: {msg}"),
            CliError::Integrity(msg) => write!(f, "numerical integrity abort: {msg}"),
            CliError::Io(err) => write!(f, "i/o error: {err}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err)
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match &err {
            CoreError::InvalidInput(_) => CliError::Config(err.to_string()),
            CoreError::Integrity { .. } => CliError::Integrity(err.to_string()),
            CoreError::TruncationLeak { .. }
            | CoreError::DegenerateAtom
            | CoreError::PoleInBlock { .. }
            | CoreError::UnclassifiedBlock { .. } => CliError::Physics(err.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
