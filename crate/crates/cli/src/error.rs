use std::fmt;
use std::process::ExitCode;

use antsys::{ConfigError, EngineError};

/// A failed command, classified by exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameter values: exit 1.
    Config(String),
    /// Unreadable or malformed input, unwritable output: exit 2.
    Io(String),
    /// Strategies disagree: exit 3.
    Verify(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Io(_) => 2,
            CliError::Verify(_) => 3,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    pub fn io(context: impl fmt::Display, err: impl fmt::Display) -> Self {
        CliError::Io(format!("{context}: {err}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) | CliError::Io(m) | CliError::Verify(m) => f.write_str(m),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Config(c) => c.into(),
            EngineError::Io { .. } | EngineError::Tsplib(_) | EngineError::Model(_) => CliError::Io(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}
