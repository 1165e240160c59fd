use thiserror::Error;

/// Everything that can go wrong while building or checking a configuration.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector {index} is zero")]
    ZeroVector { index: usize },
    #[error("configuration mixes exact and numeric components")]
    MixedScalarMode,
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("division by zero in exact arithmetic")]
    DivisionByZero,

    #[error("vectors do not span the ambient space (rank {rank} < {dim})")]
    SpanDeficient { rank: usize, dim: usize },
    #[error("vector {index} is not an eigenvector of M (residual {residual:e})")]
    NotEigenvector { index: usize, residual: f64 },

    #[error("sample count must be at least 1")]
    EmptySample,
    #[error("could not find a point with pole clearance {clearance:e} after {attempts} attempts")]
    SamplingExhausted { clearance: f64, attempts: usize },
    #[error("point lies on a pole of the kernel (|value| = {value:e})")]
    PoleHit { value: f64 },
    #[error("metric is singular (smallest/largest singular value {ratio:e})")]
    SingularMetric { ratio: f64 },

    #[error("matrix P has rank {rank} < {required}")]
    RankDeficient { rank: usize, required: usize },
    #[error("scalar h vanishes (|h| = {value:e})")]
    ZeroH { value: f64 },
    #[error("H(x) vanishes (|H| = {value:e})")]
    HVanishes { value: f64 },
    #[error("bad case parameters: {0}")]
    BadCaseParameters(String),
    #[error("complex symmetric factorization failed: {0}")]
    FactorizationFailure(String),

    #[error("unknown configuration '{name}'; known: {known}")]
    UnknownName { name: String, known: String },
    #[error("missing parameter '{0}'")]
    MissingParameter(String),
    #[error("bad parameter '{name}': {reason}")]
    BadParameter { name: String, reason: String },

    #[error("restriction of the inner product to the complement is degenerate")]
    IsotropicComplement,

    #[error("condition (1) fails along the parameter path (residual {residual:e})")]
    ConditionOneFails { residual: f64 },
    #[error("no root of the residual in [{lo}, {hi}]")]
    NoRootInInterval { lo: f64, hi: f64 },
    #[error("Jacobian is singular at the initial point")]
    SingularJacobian,
    #[error("Gauss-Newton diverged after {iterations} iterations (residual {residual:e})")]
    Diverged { iterations: usize, residual: f64 },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
