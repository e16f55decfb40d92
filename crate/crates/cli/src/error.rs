use std::fmt;

/// Command failures, mapped onto process exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Unreadable, malformed or invalid input (exit 2).
    Input(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "input error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<qkit::Error> for CliError {
    fn from(e: qkit::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
