use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the matrix types and the completion algorithms.
///
/// Matrix positions are stored zero-based and displayed one-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square with order >= {min}, got {got}")]
    BadOrder { got: usize, min: usize },
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRow { row: usize, got: usize, expected: usize },
    #[error("entry ({}, {}) must be positive and finite", .row + 1, .col + 1)]
    NonPositive { row: usize, col: usize },
    #[error("diagonal entry ({d}, {d}) must equal 1", d = .0 + 1)]
    Diagonal(usize),
    #[error("entry ({}, {}) is not the reciprocal of ({}, {})", .row + 1, .col + 1, .col + 1, .row + 1)]
    Reciprocity { row: usize, col: usize },
    #[error("entry ({}, {}) is missing but ({}, {}) is known", .row + 1, .col + 1, .col + 1, .row + 1)]
    MissingPattern { row: usize, col: usize },
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("comparison graph is disconnected; the optimal completion is not unique")]
    NonUnique,
    #[error("missing entries ({}, {}) and ({}, {}) share an alternative", .first.0 + 1, .first.1 + 1, .second.0 + 1, .second.1 + 1)]
    NotIndependent {
        first: (usize, usize),
        second: (usize, usize),
    },
    #[error("numeric failure: {0}")]
    Numeric(&'static str),
    #[error("no random index available for n = {n}, m = {m}")]
    MissingRandomIndex { n: usize, m: usize },
}
