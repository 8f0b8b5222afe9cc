use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid number: {0}")]
    InvalidNumber(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("word {0} is not in h1 (must be empty or end in y)")]
    NotH1(String),
    #[error("word {0} is not in h0 (must be empty or of the form x...y)")]
    NotH0(String),
    #[error("index {0} is not admissible")]
    NotAdmissible(String),
    #[error("index part must be positive")]
    ZeroPart,
    #[error("word length exceeds {0} letters")]
    TooLong(usize),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unknown identity: {0}")]
    UnknownIdentity(String),
    #[error("parameter error: {0}")]
    Param(String),
    #[error("numeric error: {0}")]
    Numeric(String),
}
