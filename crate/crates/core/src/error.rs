use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u32),

    #[error("field of order {p}^{k} exceeds the supported size (q <= {cap})")]
    FieldTooLarge { p: u32, k: u32, cap: u32 },

    #[error("operands belong to different fields")]
    MixedFields,

    #[error("division by zero")]
    DivisionByZero,

    #[error("the zero vector does not define a projective point or line")]
    ZeroVector,

    #[error("the two lines coincide")]
    EqualLines,

    #[error("arrangement is not essential (all lines pass through one point)")]
    NotEssential,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{what} exceeds the configured cap of {limit}")]
    CapExceeded { what: String, limit: u64 },

    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
