use alloc::string::String;
use num_bigint::BigInt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("form is not primitive: its coefficients share the factor {0}")]
    Imprimitive(BigInt),

    #[error("form is singular over Q: {0} is zero")]
    Singular(&'static str),

    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: BigInt, modulus: BigInt },

    #[error("point has {got} coordinates but the form has rank {rank}")]
    DimensionMismatch { rank: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("search budget exhausted at bound {bound}")]
    BudgetExceeded { bound: u64 },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
