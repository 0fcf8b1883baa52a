use thiserror::Error;

/// Errors raised by constructors and checkers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("modulus must be nonzero")]
    ZeroModulus,

    #[error("invalid cycle type for n = {n}: sum of i*m_i is {weight}")]
    InvalidCycleType { n: u64, weight: u64 },

    #[error("no image given for variable X_{0}")]
    MissingImage(usize),

    #[error("non-integral coefficient {value} in {context}")]
    NonIntegral { context: String, value: String },

    #[error("determinant order {order} exceeds the configured bound {bound}; use the recurrence for larger orders")]
    OrderTooLarge { order: usize, bound: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
