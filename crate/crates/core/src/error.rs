//! Error types shared across the crate.

use thiserror::Error;

/// Errors from geometric and algebraic primitives.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension must be at least 1")]
    EmptyDimension,
    #[error("value is not finite")]
    NonFiniteValue,
    #[error("weight vector must be nonzero")]
    ZeroWeight,
    #[error("truth table must have length 2^m with entries in {{-1,+1}}")]
    BadTruthTable,
    #[error("polynomial is zero (or constant where a nonzero part is required)")]
    ZeroPolynomial,
    #[error("operation requires a multilinear polynomial of degree at most 2")]
    NotMultilinearQuadratic,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Errors from sampling, smoothing, isotropization and k-wise construction.
#[derive(Debug, Error)]
pub enum DistError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("support points and probabilities must have equal nonzero length")]
    BadSupport,
    #[error("probabilities must be nonnegative and sum to 1 within 1e-12 (sum = {0})")]
    BadProbabilities(f64),
    #[error("support points must be distinct")]
    DuplicateAtom,
    #[error("sigma must lie in (0, 1), got {0}")]
    BadSigma(f64),
    #[error("covariance is singular or indefinite; supply an explicit noise covariance")]
    DegenerateCovariance,
    #[error("noise covariance must dominate sigma * cov(inner) (min eigenvalue {0:.3e})")]
    NoiseCovarianceTooSmall(f64),
    #[error("empirical covariance is rank deficient (condition number {0:.3e} > 1e12)")]
    RankDeficient(f64),
    #[error("need at least n+1 = {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("k-wise construction supports n <= 16 and 0 <= k <= n (n = {n}, k = {k})")]
    KWiseOutOfRange { n: usize, k: usize },
    #[error("internal error in k-wise construction: {0}")]
    KWiseInternal(String),
    #[error("count must be at least 1")]
    EmptyCount,
    #[error("numerical failure: {0}")]
    Numerical(String),
}
