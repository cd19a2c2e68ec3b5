use thiserror::Error;

use crate::closed_form::CodeViolation;

/// Errors raised by counting, generation, estimation and construction routines.
#[derive(Debug, Error)]
pub enum ZetaError {
    #[error("invalid range: a = {a} exceeds b = {b}")]
    Range { a: u64, b: u64 },

    #[error("enumeration budget of {budget} elements exceeded (partial count {partial})")]
    BudgetExceeded { budget: u64, partial: u64 },

    #[error("{0}")]
    Usage(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid instantaneous code: {}", format_violations(.0))]
    InvalidCode(Vec<CodeViolation>),

    #[error("invalid substitution rule: {0}")]
    InvalidRule(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("supergale construction infeasible: s = {s} does not exceed the estimated dimension {estimate}")]
    Infeasible { s: f64, estimate: f64 },

    #[error("depth {requested} exceeds available depth {available}")]
    Depth { requested: usize, available: usize },

    #[error("{}: {source}", .path.display())]
    File {
        path: std::path::PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn format_violations(v: &[CodeViolation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl ZetaError {
    /// True for errors caused by the caller's arguments rather than by the mathematics.
    pub fn is_usage(&self) -> bool {
        matches!(self, ZetaError::Usage(_))
    }
}

pub type Result<T> = std::result::Result<T, ZetaError>;
