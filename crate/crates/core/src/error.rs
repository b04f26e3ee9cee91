use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("precision failure: {0}")]
    PrecisionFailure(String),

    /// Some lattice point sits within the certification margin of the boundary.
    #[error("ambiguous boundary at t = {t}: margin {margin:e}")]
    AmbiguousBoundary { t: f64, margin: f64 },

    /// A cost guard refused the request.
    #[error("refused: {0}")]
    Refused(String),

    #[error("undefined slope: {0}")]
    UndefinedSlope(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
