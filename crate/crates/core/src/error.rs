use thiserror::Error;

/// Errors raised by the solver and diagnostics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("time {t} lies outside the field's range [{start}, {end}]")]
    TimeOutOfRange { t: f64, start: f64, end: f64 },

    #[error("cylinder time interval ({lo}, {hi}) does not meet the field's range [{start}, {end}]")]
    EmptyWindow { lo: f64, hi: f64, start: f64, end: f64 },

    #[error("missing derivative of order {0}")]
    MissingDerivative(usize),

    #[error("blow-up: last finite time {last_finite_time}, max |u| = {max_abs}")]
    BlowUp { last_finite_time: f64, max_abs: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
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
