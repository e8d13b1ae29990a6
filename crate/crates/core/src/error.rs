use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent not representable: {0}")]
    Exponent(String),
    #[error("argument out of range: {0}")]
    Domain(String),
    #[error("parse error at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("unsupported type: {0}")]
    UnsupportedType(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("symbol outside the alphabet: {0}")]
    ForeignSymbol(String),
    #[error("missing image for generator {0}")]
    MissingImage(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("replay failed at step {step}: {msg}")]
    Replay { step: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(offset: usize, msg: impl Into<String>) -> Self {
        Error::Parse { offset, msg: msg.into() }
    }
}
