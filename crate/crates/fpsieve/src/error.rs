use thiserror::Error;

/// Errors produced by parsing, encoding, configuration and the oracle.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input data; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("encoding error: {0}")]
    Encode(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid record schema: {0}")]
    Schema(String),

    #[error("invalid level context: {0}")]
    Context(String),

    /// The oracle refuses to enumerate more itemsets than its budget allows.
    #[error("oracle budget exceeded: {needed} candidate itemsets > budget {budget}")]
    OracleBudget { needed: u128, budget: u128 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
