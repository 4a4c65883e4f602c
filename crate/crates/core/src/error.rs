use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("variable sets differ: [{left}] vs [{right}]")]
    VarSetMismatch { left: String, right: String },

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable {name} at position {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("operation is only defined on xi-free polynomials")]
    XiPresent,

    #[error("expected a homogeneous element of degree {expected}")]
    WrongDegree { expected: usize },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("target is not in the span of the requested basis")]
    NotInSpan,

    #[error("weights must sum to zero (got sum {0})")]
    WeightSum(i64),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
