use thiserror::Error;

/// Errors raised while reading data, validating parameters or writing reports.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text (corpus, model or config file).
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Well-formed input that violates a data invariant.
    #[error("{0}")]
    Validation(String),

    /// A learner or experiment parameter out of its admissible range.
    #[error("{0}")]
    Param(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    /// True for errors caused by the caller's arguments rather than by data.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Param(_))
    }
}
