use thiserror::Error;

/// Errors raised by the library. Non-convergence of the spectral solver is
/// not an error; it is reported through `SpectralResult::converged`.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("search space too large: {possible_edges} possible edges exceeds the cap of {cap}; pass the override flag to run anyway")]
    SearchCapExceeded { possible_edges: u64, cap: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
