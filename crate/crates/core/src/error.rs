use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("element is not real (differs from its complex conjugate)")]
    NotReal,

    #[error("element is not invertible in the supported unit group: {0}")]
    NotInvertible(String),

    #[error("not a root of unity: {0}")]
    NotRootOfUnity(String),

    #[error("the trivial character omega = 1 is not allowed")]
    TrivialCharacter,

    #[error("matrix is not Hermitian: entry ({row}, {col}) differs from the conjugate of ({col}, {row})")]
    NotHermitian { row: usize, col: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid Seifert matrix: {0}")]
    InvalidSeifert(String),

    #[error("depth or index {0} is below the minimum of 2")]
    DepthTooSmall(i64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("the circle average is irrational: Alexander polynomial has unit-circle roots that are not roots of unity")]
    NonCyclotomicJump,

    #[error("insufficient knot basis: closest reachable value {closest} misses target {target} by more than {tolerance}")]
    InsufficientKnotBasis {
        target: String,
        closest: String,
        tolerance: String,
    },
}
