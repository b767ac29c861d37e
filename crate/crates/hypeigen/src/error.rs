use std::fmt;
use std::io;

use hypeigen_core::Error;
use serde_json::json;

/// Anything a subcommand can fail with, mapped onto the process exit codes
/// 1 (verification failure), 2 (bad arguments) and 3 (numerical failure).
#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Config(String),
    Io(io::Error),
    /// Checks ran but some failed; the message names them.
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) | CliError::Core(Error::InvariantViolation(_)) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(e) if e.is_argument() => 2,
            CliError::Core(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(Error::Argument(_)) => "argument",
            CliError::Core(Error::DimensionMismatch { .. }) => "dimension-mismatch",
            CliError::Core(Error::OutsideDomain(_)) => "outside-domain",
            CliError::Core(Error::Numerical(_)) => "numerical",
            CliError::Core(Error::Spectral { .. }) => "spectral",
            CliError::Core(Error::InvariantViolation(_)) => "invariant-violation",
            CliError::Core(Error::Resource { .. }) => "resource",
            CliError::Config(_) => "config",
            CliError::Io(_) => "io",
            CliError::Verification(_) => "verification",
        }
    }

    /// The object printed on stderr.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Config(m) | CliError::Verification(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}
