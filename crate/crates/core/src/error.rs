use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid control field: {0}")]
    InvalidField(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("time {t} is not on the step grid of the field")]
    OffGrid { t: f64 },

    #[error("negative duration {0}")]
    NegativeDuration(f64),

    #[error("no oscillatory maximum: weak coupling 2p <= q (p = {p}, q = {q})")]
    NoOscillatoryMaximum { p: f64, q: f64 },

    #[error("gain undefined: free-evolution population difference is zero")]
    UndefinedGain,

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
