//! Command-line front end: argument and file parsing, the commands, and the
//! `hsc-report/1` report.

pub mod algebra_file;
pub mod commands;
pub mod config;
pub mod report;

use thiserror::Error;

/// Problems with what the user supplied; the binary exits with status 2.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{path}:{line}: {msg}")]
    File { path: String, line: usize, msg: String },

    #[error("cannot read {0}: {1}")]
    Io(String, String),

    #[error("{path}{}: {msg}", line.map(|l| format!(":{l}")).unwrap_or_default())]
    Config { path: String, msg: String, line: Option<usize> },

    #[error("{0}")]
    Value(String),

    #[error("instance rejected: {0}")]
    Instance(String),
}

pub use commands::{execute, Cli, Command};
pub use report::Report;
