//! Library backing the `padicalc` binary: JSON command plumbing and the
//! acceptance suite, shared with the integration tests.

pub mod acceptance;
pub mod commands;

use std::fmt;

/// CLI failure classes: schema violations exit with 2, mathematical
/// precondition failures with 3.
#[derive(Debug)]
pub enum CliError {
    Schema(String),
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Math(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema(m) => write!(f, "schema error: {m}"),
            CliError::Math(m) => write!(f, "math error: {m}"),
        }
    }
}

impl From<padicalc_core::Error> for CliError {
    fn from(e: padicalc_core::Error) -> Self {
        match e {
            padicalc_core::Error::Schema(m) => CliError::Schema(m),
            other => CliError::Math(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Schema(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Reads and parses a JSON input file.
pub fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

/// Serializes a value as pretty JSON with a trailing newline.
pub fn to_output<T: serde::Serialize>(value: &T) -> CliResult<String> {
    Ok(format!("{}\n", serde_json::to_string_pretty(value)?))
}
