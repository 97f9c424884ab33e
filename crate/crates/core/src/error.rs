use alloc::string::String;

/// Errors raised by the exact and numeric routines of this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("polynomial division is not exact")]
    NotDivisible,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error(
        "no configuration with k <= {max_k} reached full rank (best rank {best_rank} of {target})"
    )]
    Exhausted {
        max_k: usize,
        best_rank: usize,
        target: usize,
    },

    #[error("symbolic check refused: m = {m} exceeds feasibility cap {cap}")]
    FeasibilityCap { m: usize, cap: usize },

    #[error("unknown polynomial '{0}'")]
    UnknownPolynomial(String),

    #[error("claimed zero #{index} does not annihilate the polynomial")]
    NotAZero { index: usize },

    #[error("kernel flow breakdown at t = {t}: {reason}")]
    FlowBreakdown { t: f64, reason: String },

    #[error(
        "sequence is not a moment sequence within tolerance (best residual {best_residual:e})"
    )]
    NotAMomentSequence { best_residual: f64 },

    #[error("no representing measure found up to k = {max_k} (best residual {best_residual:e})")]
    Inconsistent { max_k: usize, best_residual: f64 },

    #[error("solver did not converge (best residual {best_residual:e})")]
    NotConverged { best_residual: f64 },

    #[error("missing value for beta({0})")]
    MissingBeta(u64),
}

pub type Result<T> = core::result::Result<T, Error>;
