//! Completion of incomplete pairwise comparison matrices.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! - [`pcm`]: complete and incomplete reciprocal matrices, their comparison
//!   graph, triads and the triad inconsistency indices (TI and Koczkodaj KI).
//! - [`lp`]: a small dense two-phase simplex solver that reports a dual value
//!   for every constraint.
//! - [`lex`]: the lexicographically optimal completion, computed by successive
//!   linear programs that minimise the worst triad inconsistency and then fix it,
//!   plus a closed form for independent missing entries.
//! - [`baseline`]: the eigenvalue-optimal (CR) and logarithmic least squares
//!   completions, and eigenvector / geometric mean weights.
//! - [`metrics`]: incompatibility index, Saaty's consistency index and ratio.
#![no_std]

extern crate alloc;

pub mod baseline;
pub mod error;
pub mod lex;
pub mod lp;
pub mod math;
pub mod metrics;
pub mod pcm;

pub use baseline::{
    cr_optimal_complete, em_weights, gm_weights, lambda_max, lambda_min_lower_bound, lls_logs, lls_optimal_complete,
    perron,
    WeightVector,
};
pub use error::{Error, Result};
pub use lex::{
    build_lp1, check_uniqueness, independent_fast_path, lex_complete, lex_complete_with,
    CompletionResult, LexOptions, LexState, Method, TieBreak, TraceStep,
};
pub use lp::{LpProblem, LpSolution, LpStatus, Relation};
pub use metrics::{consistency_index, cr_incomplete, ici, ratio_to_ri, RiProvenance, RiTable};
pub use pcm::{
    all_triads, lex_compare, lex_compare_tol, matrix_ki, matrix_ti, theta_vector, triad_ki,
    triad_ti, ComparisonGraph, CompletePcm, IncompletePcm, ThetaVector, Triad,
};
