use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid piece {index}: {reason}")]
    InvalidPiece { index: usize, reason: String },

    #[error("pieces {first} and {second} overlap")]
    Overlap { first: usize, second: usize },

    #[error("function is not non-increasing: {0}")]
    NotNonIncreasing(String),

    #[error("not in L^{{p,s}}: {0}")]
    Divergent(String),

    #[error("invalid exponents: {0}")]
    InvalidExponents(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("shuffle instance violates prefix domination at column {column}")]
    PrefixDomination { column: usize },

    #[error("computation budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
