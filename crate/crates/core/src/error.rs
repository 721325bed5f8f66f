use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("point {0} is not in the universe")]
    UnknownPoint(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("operation not supported for {0} instances")]
    UnsupportedKind(&'static str),
    #[error("invalid pattern spec: {0}")]
    InvalidSpec(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid condition: {0}")]
    InvalidCondition(String),
    #[error("invalid stage: {0}")]
    InvalidStage(String),
    #[error("conditions are incompatible: {0}")]
    Incompatible(String),
    #[error("location error: {0}")]
    Location(String),
    #[error("reduction failed in box {box_index}: {reason}")]
    ReductionFailure { box_index: usize, reason: String },
    #[error("search space of size {size} exceeds the oracle bound {bound}")]
    OracleBound { size: u128, bound: u128 },
    #[error("value out of range: {0}")]
    Range(String),
    #[error("invalid epsilon sequence: {0}")]
    InvalidSequence(String),
    #[error("not a partition: {0}")]
    Partition(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
