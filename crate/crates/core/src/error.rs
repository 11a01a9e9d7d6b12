use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid basis object: {0}")]
    InvalidBasis(String),
    #[error("length mismatch: {0} scalars for {1} elements")]
    LengthMismatch(usize, usize),
    #[error("empty argument list")]
    EmptyList,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("element is zero")]
    ZeroInput,
    #[error("element is not primitive: {0}")]
    NotPrimitive(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
