use thiserror::Error;

/// Errors raised by every module of the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a unit: {0}")]
    NonUnit(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("singular lift: {0}")]
    SingularLift(String),
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("parameter mismatch: {0}")]
    Mismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("inapplicable: {0}")]
    Inapplicable(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag used in JSON error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonUnit(_) => "non_unit",
            Error::Domain(_) => "domain",
            Error::Unsupported(_) => "unsupported",
            Error::SingularLift(_) => "singular_lift",
            Error::Precision(_) => "precision",
            Error::Resource(_) => "resource",
            Error::Mismatch(_) => "mismatch",
            Error::Invalid(_) => "invalid",
            Error::Inapplicable(_) => "inapplicable",
            Error::Hypothesis(_) => "hypothesis",
            Error::InsufficientData(_) => "insufficient_data",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
