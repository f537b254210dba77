use alloc::string::String;

/// Errors raised by the solver kit.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Inputs violate an operation's preconditions (shapes, lengths, parameters).
    #[error("usage error: {0}")]
    Usage(String),
    /// The explicit scheme would be run with a CFL number above one.
    #[error("unstable discretization: CFL number {cfl} exceeds 1")]
    Unstable { cfl: f64 },
    /// A function was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}
