use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Bad arguments: foreign symbols, malformed configurations, wrong machine kind.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A machine that breaks one of its structural invariants.
    #[error("validation error: {}", .0.join("; "))]
    Validation(Vec<String>),

    /// A Turing machine that violates the assumptions of the computation-history encoding.
    #[error("conformance error: {0}")]
    Conformance(String),

    /// Co-reachable branches of a supposedly oblivious machine disagree on head moves.
    #[error("obliviousness violation: {0}")]
    Obliviousness(String),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, message: msg.into() }
    }
}
