//! Command-line front end: parse a problem file, run one command, and emit
//! a deterministic report.

pub mod problem;
pub mod report;

use lierin_core::linalg::Field;
use thiserror::Error;

pub use report::{render, run, Command, Format, Report, RunOptions};

/// Errors in the input itself. These exit with status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at `{path}` (line {line}, column {column}): {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("shape error in {field}: expected {expected}, got {actual}")]
    Shape { field: String, expected: usize, actual: usize },
    #[error("bad scalar in {field}: {message}")]
    Scalar { field: String, message: String },
    #[error("{0}")]
    Input(String),
}

/// Parses `rational`, `Q`, a prime `p`, or `F_p`.
pub fn parse_field(text: &str) -> Result<Field, CliError> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("rational") || t == "Q" {
        return Ok(Field::Rational);
    }
    let digits = t.strip_prefix("F_").or_else(|| t.strip_prefix("F")).unwrap_or(t);
    let p: u64 = digits
        .parse()
        .map_err(|_| CliError::Input(format!("unknown field `{text}`")))?;
    Field::prime(p).map_err(|e| CliError::Input(e.to_string()))
}
