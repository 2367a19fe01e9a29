use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotAPrimePower(u64),
    #[error("field order {q} exceeds the configured cap {cap}")]
    FieldTooLarge { q: u64, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero vector has no projective point")]
    ZeroVector,
    #[error("dimension mismatch: expected ambient dimension {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("wrong subspace dimension: expected {expected}, got {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("instance too large: {count} points exceeds cap {cap}")]
    TooLarge { count: u64, cap: u64 },
    #[error("random construction failed after {0} attempts")]
    RetriesExhausted(usize),
    #[error("query set is not separating")]
    NotSeparating,
    #[error("point query has {0} unseparated partners, expected exactly one")]
    UniquenessViolation(usize),
    #[error("no separating system of size at most {0}")]
    Exhausted(usize),
    #[error("oracle answers left no consistent point")]
    InconsistentOracle,
    #[error("searcher announced {0} while {1} candidates remain")]
    BadAnnounce(String, usize),
    #[error("adversary internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
