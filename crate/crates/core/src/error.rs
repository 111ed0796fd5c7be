use thiserror::Error;

/// Errors are split by how the caller should react: bad input, a size cap,
/// a violated theorem hypothesis, or a falsified invariant that a proved
/// statement guarantees (the last one indicates a bug and must abort loudly).
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("falsified invariant: {0}")]
    FalsifiedLemma(String),
}

impl Error {
    /// Process exit code used by the CLI: 1 input/hypothesis, 2 capacity,
    /// 3 for a falsified invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Hypothesis(_) => 1,
            Error::Capacity(_) => 2,
            Error::FalsifiedLemma(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

pub(crate) fn capacity(msg: impl Into<String>) -> Error {
    Error::Capacity(msg.into())
}

pub(crate) fn hypothesis(msg: impl Into<String>) -> Error {
    Error::Hypothesis(msg.into())
}

pub(crate) fn falsified(msg: impl Into<String>) -> Error {
    Error::FalsifiedLemma(msg.into())
}
