use thiserror::Error;

/// Errors raised by construction, certification and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {n} too small (need n >= {min})")]
    DimensionTooSmall { n: usize, min: usize },

    #[error("expected {expected} entries, got {got}")]
    WrongEntryCount { expected: usize, got: usize },

    #[error("nonpositive entry {value} at ({i}, {j})")]
    NonpositiveEntry { i: usize, j: usize, value: f64 },

    #[error("nonfinite entry at ({i}, {j})")]
    NonfiniteEntry { i: usize, j: usize },

    #[error("negative or nonfinite slack {value} in row {row}")]
    NegativeSlack { row: usize, value: f64 },

    #[error("invalid bounds: need 0 < m <= M, got m = {m}, M = {big_m}")]
    InvalidBounds { m: f64, big_m: f64 },

    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("lambda {lambda} outside [1, {upper}]")]
    LambdaOutOfRange { lambda: f64, upper: f64 },

    #[error("extension bound inapplicable at this n (bracket = {bracket})")]
    BoundInapplicable { bracket: f64 },

    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("conjugate gradient breakdown at iteration {iteration} (curvature {curvature:e})")]
    Breakdown { iteration: usize, curvature: f64 },

    #[error("damping theta = {theta} does not give a positive definite preconditioner")]
    InvalidDamping { theta: f64 },

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("degree {value} of node {node} outside [0, {max}]")]
    DegreeOutOfRange { node: usize, value: f64, max: f64 },

    #[error("integer degree sequence has odd sum {0}")]
    OddDegreeSum(u64),

    #[error("MLE may not exist: node {node} has boundary degree {degree}")]
    BoundaryDegree { node: usize, degree: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("dimension {n} exceeds dense oracle ceiling {max}")]
    OracleTooLarge { n: usize, max: usize },

    #[error("need at least {needed} distinct points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
