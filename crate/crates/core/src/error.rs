use thiserror::Error;

/// Errors produced by the library. `Input` covers malformed or inconsistent
/// user data; `Certificate` is reserved for internal cross-check failures
/// (an optimality certificate or a dual-route computation that disagrees),
/// which always indicate a bug rather than bad input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("internal certificate failure: {0}")]
    Certificate(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn certificate(msg: impl Into<String>) -> Self {
        Error::Certificate(msg.into())
    }
}
