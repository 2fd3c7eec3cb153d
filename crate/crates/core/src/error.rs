use thiserror::Error;

use crate::model::Violation;

/// Errors raised by the solver toolkit.
///
/// State indices carried by variants are 0-based; the `Display` output uses
/// the 1-based numbering of the model file.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid policy at state {}: {reason}", .state + 1)]
    InvalidPolicy { state: usize, reason: String },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error(
        "policy is not in the mean-constrained set: |J - lambda| = {deviation:.3e} at state {} exceeds {tolerance:.1e}",
        .state + 1
    )]
    InfeasiblePolicy {
        state: usize,
        deviation: f64,
        tolerance: f64,
    },

    #[error("feasible action set of state {} is empty", .state + 1)]
    EmptyFeasibleSet { state: usize },

    #[error("enumeration of {count} policies exceeds the cap of {cap}")]
    EnumerationTooLarge { count: u128, cap: u128 },

    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("model is invalid: {}", format_violations(.0))]
    InvalidModel(Vec<Violation>),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
