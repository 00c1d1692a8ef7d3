//! Batch front end for the zero-cycle coalgebra models.
//!
//! The library half of the `corad` binary: a line-oriented model-definition
//! format, loaders for every model kind, and the eight commands that run
//! verification suites and assemble deterministic reports. The binary is a
//! thin argument-parsing shell around [`commands`].
//!
//! Exit-code contract (enforced by the binary, decided here):
//! 0 when every check in the report passes, 1 when any property is violated
//! (the report carries a witness), 2 on input, parse, or cap errors.

pub mod commands;
pub mod definition;
pub mod report;

use thiserror::Error;

/// Input-side failures: anything that prevents a suite from running at all.
/// These map to exit status 2. Property violations are never errors; they
/// are recorded in the report and map to exit status 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
}
