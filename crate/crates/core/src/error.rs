use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no inverse of zero")]
    ZeroInverse,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("residue table violation at index {index}: {reason}")]
    ResidueTable { index: usize, reason: String },

    #[error("character is defined over F_{expected}, histogram over F_{found}")]
    ModulusMismatch { expected: u64, found: u64 },

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("nothing to emit")]
    NothingToEmit,

    #[error("cannot write {path}: {msg}")]
    Io { path: String, msg: String },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
