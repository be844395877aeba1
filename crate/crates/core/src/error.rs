//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by diagram parsing and the metric/statistic operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A line of a diagram file could not be tokenized or parsed.
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A point violates `birth < death` (or has a non-finite birth).
    #[error("invalid point{}: {msg}", line.map(|l| format!(" on line {l}")).unwrap_or_default())]
    Invariant { line: Option<usize>, msg: String },

    /// The operation is undefined for essential points (`death = inf`).
    #[error("operation undefined for essential points (death = inf)")]
    EssentialPoint,

    /// Every assignment has infinite cost.
    #[error("no assignment with finite cost exists")]
    Infeasible,

    /// An enumeration would exceed the configured cap.
    #[error("problem size {size} exceeds enumeration cap {cap}")]
    SizeLimit { size: usize, cap: usize },

    /// A parameter is outside its domain (p < 1, t outside [0,1], ...).
    #[error("{0}")]
    Domain(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
