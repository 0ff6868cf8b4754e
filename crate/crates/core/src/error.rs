use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("size limit exceeded for {what}: {got} > {limit}")]
    SizeLimit { what: &'static str, limit: u128, got: u128 },

    #[error("point {b} is not above roots (largest eigenvalue {lambda_max})")]
    NotAboveRoots { b: f64, lambda_max: f64 },

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("polynomial has no real roots")]
    NoRealRoots,

    #[error("polynomial is not real rooted")]
    NotRealRooted,

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("leading coefficients must be positive")]
    NonPositiveLeading,

    #[error("constant term of a truncated power base must be 1")]
    ConstantTermNotOne,

    #[error("matrix is not hermitian (deviation {deviation})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig})")]
    NotPsd { min_eig: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("negative weight {weight} for subset {subset:?}")]
    NegativeWeight { subset: Vec<usize>, weight: f64 },

    #[error("negative input: {0}")]
    NegativeInput(String),

    #[error("singular matrix")]
    Singular,

    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}

impl Error {
    pub(crate) fn size(what: &'static str, limit: u128, got: u128) -> Self {
        Error::SizeLimit { what, limit, got }
    }
}
