use thiserror::Error;

/// Errors raised by the library. Every variant maps onto one CLI exit code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not a supported prime")]
    NotPrime(u64),

    /// `m < 2^floor(log2 k)`: no weighting of the first `m` classes has PST.
    #[error("no perfect state transfer is possible: m = {m} is below 2^floor(log2 {k}) = {min_m}")]
    Obstruction { k: usize, m: usize, min_m: usize },

    #[error("coefficient parity pattern is invalid at j = {offending:?} (c_j must be odd exactly when j is a power of two)")]
    ParityPattern { offending: Vec<usize> },

    #[error("subset T is missing the required power of two {0}")]
    MissingPowerOfTwo(usize),

    #[error("capacity exceeded: {what} needs {size}, cap is {cap}")]
    Capacity { what: String, size: u128, cap: u128 },

    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn capacity(what: impl Into<String>, size: u128, cap: u128) -> Self {
        Error::Capacity { what: what.into(), size, cap }
    }

    /// Process exit code used by the `jpst` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity { .. } => 3,
            Error::Numeric(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
