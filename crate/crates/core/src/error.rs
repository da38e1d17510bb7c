//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Error, Debug)]
pub enum Error {
    /// Input violated a documented precondition (non-integral matrix where an
    /// integral one is required, modulus out of range, malformed word, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A denominator is not invertible modulo the requested modulus.
    #[error("cannot reduce mod {modulus}: denominator {denominator} shares a factor with it")]
    ModReduce { modulus: u32, denominator: String },

    /// Data file (catalog / presentation) failed to parse or validate.
    #[error("data error: {0}")]
    Data(String),

    /// A coset enumeration exceeded its budget before completing.
    #[error("enumeration budget of {budget} cosets exceeded ({defined} defined, {live} live at abort)")]
    BudgetExceeded { budget: u64, defined: u64, live: u64 },

    /// A computation is infeasible under the configured resource limits
    /// (e.g. BFS element cap or Schreier-Sims domain cap).
    #[error("infeasible under configured limits: {0}")]
    Infeasible(String),

    /// An internal cross-check failed; indicates a bug or corrupted data.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("unknown strategy or method name: {0}")]
    UnknownName(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
