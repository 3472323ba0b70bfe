use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by evaluators, scanners and the b-file reader.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} = {value} is outside [{min}, {max}]")]
    Bounds {
        what: &'static str,
        value: u64,
        min: u64,
        max: u64,
    },

    #[error("128-bit overflow while evaluating {what} at n = {n}")]
    Overflow { what: &'static str, n: u64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("b-file format error at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("b-file mismatch at entry ({index}, {value}): {message}")]
    DataMismatch {
        index: u64,
        value: u64,
        message: String,
    },

    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
