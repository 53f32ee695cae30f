use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("point space {modulus}^{rank} exceeds the limit of {limit} points")]
    PointSpaceOverflow { modulus: u64, rank: usize, limit: u64 },
    #[error("group order exceeds the guard of {0}")]
    OrderGuard(u128),
    #[error("orbit exceeds the guard of {0} points")]
    OrbitGuard(usize),
    #[error("element is not invertible modulo {0}")]
    NotInvertible(u64),
    #[error("invalid generator word: {0}")]
    InvalidWord(String),
    #[error("window {0} is not of Euclidean type")]
    NotEuclidean(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::OrderGuard(_) | Error::OrbitGuard(_) | Error::PointSpaceOverflow { .. }
        )
    }
}
