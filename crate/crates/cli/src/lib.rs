//! Library side of the `quantpool` command-line harness: configuration,
//! CSV/SVG emission and the sweep runners. The binary in `main.rs` is a
//! thin flag-parsing layer over these.

pub mod config;
pub mod csvio;
pub mod experiment;
pub mod svg;

use std::fmt;
use std::process::ExitCode;

/// Errors carrying their process exit class.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration: exit 2.
    Config(String),
    /// Filesystem failure: exit 3.
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(2),
            CliError::Io(_) => ExitCode::from(3),
        }
    }
}
