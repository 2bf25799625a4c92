use thiserror::Error;

/// A syntax error in formula text, positioned at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Errors raised while configuring semantics or evaluating robustness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid semantics parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown semantics `{0}`")]
    UnknownSemantics(String),

    #[error("aggregation over an empty list")]
    EmptyAggregation,

    #[error("delta max needs at least 2 values, got {0}")]
    TooFewValues(usize),

    #[error("signal `{0}` is missing")]
    MissingSignal(String),

    #[error("no domain declared for signal `{0}`")]
    MissingDomain(String),

    #[error("invalid domain for signal `{signal}`: [{lo}, {hi}]")]
    InvalidDomain { signal: String, lo: f64, hi: f64 },

    #[error("trace of length {len} is too short to evaluate at t = {t} with horizon {horizon}")]
    TraceTooShort { len: usize, t: usize, horizon: usize },

    #[error("invalid trace: {0}")]
    InvalidTrace(String),

    #[error("non-finite value for signal `{signal}` at step {step}")]
    NonFinite { signal: String, step: usize },

    #[error("csv error: {0}")]
    Csv(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
