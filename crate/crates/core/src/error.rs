use thiserror::Error;

/// Coarse classification used for process exit codes and FFI status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed textual input.
    Parse,
    /// A precondition of an operation was violated.
    Contract,
    /// A configured size or enumeration limit was exceeded.
    Resource,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("conductor {requested} exceeds the ceiling of {ceiling}")]
    ConductorTooLarge { requested: u64, ceiling: u32 },

    #[error("conductor must be positive")]
    ZeroConductor,

    #[error("division by zero")]
    DivisionByZero,

    #[error("element {0} is not rational")]
    NotRational(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not unitary")]
    NotUnitary,

    #[error("zero vector where a nonzero state is required")]
    ZeroVector,

    #[error("observation (t={t}, x={x}) violates lattice parity or range")]
    ParityViolation { t: i64, x: i64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_) => ErrorKind::Parse,
            Error::ConductorTooLarge { .. } | Error::ResourceLimit(_) => ErrorKind::Resource,
            _ => ErrorKind::Contract,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
