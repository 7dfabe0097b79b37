use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported algebra: {0}")]
    UnsupportedAlgebra(String),
    #[error("not a root of this root system: {0}")]
    NotARoot(String),
    #[error("root string through ±α itself is degenerate")]
    DegenerateString,
    #[error("Θ contains every simple root; the tangent space is empty")]
    EmptyTangentSpace,
    #[error("Θ index {0} is out of range")]
    InvalidTheta(usize),
    #[error("unknown space {0:?} (expected one of su3-full, cp3, su4-full, g2-u2, g2-full)")]
    UnknownSpace(String),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("invalid almost complex structure: {0}")]
    InvalidAcs(String),
    #[error("expected {expected} per-summand values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("metric and almost complex structure live on different spaces")]
    SpaceMismatch,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("family not solvable by the supported methods: {0}")]
    UnsupportedFamily(String),
    #[error("tolerance must be positive")]
    InvalidTolerance,
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
