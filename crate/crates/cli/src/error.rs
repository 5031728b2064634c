use std::path::PathBuf;

use sigforge_core::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error("invalid SIGFORGE_PRECISION_BITS: {0:?}")]
    Precision(String),

    #[error("output failed: {0}")]
    Output(String),
}

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// I/O failure or internal error.
    pub const IO: i32 = 1;
    /// Bad or missing command-line arguments.
    pub const USAGE: i32 = 2;
    /// Input that does not parse or is structurally invalid (bad JSON,
    /// non-Hermitian matrix, invalid Seifert matrix, bad literal).
    pub const MALFORMED: i32 = 3;
    /// The trivial character `omega = 1`.
    pub const TRIVIAL_CHARACTER: i32 = 4;
    /// A depth or index below 2.
    pub const DEPTH_TOO_SMALL: i32 = 5;
    /// `omega` is not a root of unity.
    pub const NOT_ROOT_OF_UNITY: i32 = 6;
    /// The shipped knots cannot reach the requested value.
    pub const INSUFFICIENT_BASIS: i32 = 7;
    /// A circle average with jumps away from the roots of unity.
    pub const NON_CYCLOTOMIC_JUMP: i32 = 8;
    /// Any other violated precondition on parameters.
    pub const INVALID_PARAMETER: i32 = 9;
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Output(_) => exit::IO,
            CliError::Usage(_) => exit::USAGE,
            CliError::Json { .. } | CliError::Precision(_) => exit::MALFORMED,
            CliError::Core(e) => match e {
                Error::Parse(_)
                | Error::NotHermitian { .. }
                | Error::Dimension(_)
                | Error::InvalidSeifert(_) => exit::MALFORMED,
                Error::TrivialCharacter => exit::TRIVIAL_CHARACTER,
                Error::DepthTooSmall(_) => exit::DEPTH_TOO_SMALL,
                Error::NotRootOfUnity(_) => exit::NOT_ROOT_OF_UNITY,
                Error::InsufficientKnotBasis { .. } => exit::INSUFFICIENT_BASIS,
                Error::NonCyclotomicJump => exit::NON_CYCLOTOMIC_JUMP,
                Error::NotReal | Error::NotInvertible(_) | Error::InvalidParameter(_) => {
                    exit::INVALID_PARAMETER
                }
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
