use thiserror::Error;

/// Errors raised by the frame toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid paire: {0}")]
    InvalidPaire(String),

    #[error("the unit ball of an l^p norm with p = {0} is not a polytope")]
    NonPolyhedralNorm(f64),

    #[error("{what} = {size} exceeds the enumeration limit {limit}")]
    DimensionTooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("no exact operator norm for l^p with p = {0}; use the sampled method")]
    UnsupportedExactNorm(f64),

    #[error("summing exponent must lie in (1, inf), got {0}")]
    InvalidExponent(f64),

    #[error("operation requires a Euclidean space (p = 2, unit weights)")]
    NonEuclidean,

    #[error("basis is singular (condition number {condition:e})")]
    SingularBasis { condition: f64 },

    #[error("vectors do not form a frame (smallest frame-operator eigenvalue {lower:e})")]
    NotAFrame { lower: f64 },

    #[error("projector is not idempotent (|P^2 - P| = {defect:e})")]
    NotIdempotent { defect: f64 },

    #[error("projector range does not match the subspace basis: {0}")]
    RangeMismatch(String),

    #[error("subspace norm is not a weighted l^p norm: {0}")]
    UnsupportedSubspace(String),

    #[error("product norm is not a weighted l^p norm: {0}")]
    UnsupportedProductNorm(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("paire is not a Schauder frame (reconstruction residual {residual:e})")]
    NotASchauderFrame { residual: f64 },

    #[error("paire carries no finite besselian certificate")]
    NotBesselianCertified,

    #[error("Haar level {level} exceeds the limit {limit}")]
    LevelTooLarge { level: u32, limit: u32 },
}

pub type Result<T> = std::result::Result<T, FrameError>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(FrameError::DimensionMismatch { expected, found })
    }
}
