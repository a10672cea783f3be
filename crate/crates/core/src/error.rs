use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A computation would exceed a configured work budget.
    #[error("{what} needs {required}, budget is {limit}; {advice}")]
    Budget {
        what: &'static str,
        required: u64,
        limit: u64,
        advice: &'static str,
    },

    /// A ball-growth chain was asked to expand an empty boundary.
    #[error("chain halted at step {step}: boundary is empty")]
    ChainHalted { step: usize },

    #[error("malformed graph file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
