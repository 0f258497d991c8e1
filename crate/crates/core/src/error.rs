use thiserror::Error;

/// Errors raised by the height library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no square root")]
    NoSquareRoot,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("log term required")]
    LogTermRequired,
    #[error("raise series order: at least {required} terms needed")]
    RaiseSeriesOrder { required: usize },
    #[error("prime too small")]
    PrimeTooSmall,
    #[error("bad reduction")]
    BadReduction,
    #[error("singular")]
    Singular,
    #[error("no unit-y point")]
    NoUnitYPoint,
    #[error("not ordinary at p")]
    NotOrdinary,
    #[error("Condition 1 required: {0}")]
    Condition(String),
    #[error("not supported: {0}")]
    NotSupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code: 1 usage, 2 math domain, 3 precision, 4 IO.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid(_) => 1,
            Error::PrecisionExhausted(_) | Error::RaiseSeriesOrder { .. } => 3,
            Error::Io(_) => 4,
            _ => 2,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::PrecisionExhausted(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
