use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The key rate does not satisfy the requirement of the requested scheme.
    #[error("infeasible key rate Rs = {rs} bits: {reason}")]
    InfeasibleKeyRate { rs: f64, reason: &'static str },

    /// The closed form is only known for Rs >= 1 bit.
    #[error("key rate Rs = {rs} bits is outside the regime Rs >= 1 bit")]
    OutOfRegime { rs: f64 },

    #[error("support size {size} exceeds the cap of {cap} points")]
    TooLargeInstance { size: usize, cap: usize },

    #[error("linear program solver failed: {0}")]
    Solver(String),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
