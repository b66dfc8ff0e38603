use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid scenario: every input and output count must be at least 1")]
    InvalidScenario,
    #[error("{what} index {index} out of range (must be < {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },
    #[error("reduced coordinates need binary outputs, got kA={ka} kB={kb}")]
    NonBinaryOutputs { ka: usize, kb: usize },
    #[error("table is signaling: {0}")]
    Signaling(String),
    #[error("lifted entry p({a}{b}|{i}{j}) = {value} lies outside [0, 1]")]
    LiftOutOfRange {
        a: usize,
        b: usize,
        i: usize,
        j: usize,
        value: String,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("scenario mismatch: {0}")]
    ScenarioMismatch(String),
    #[error("ensemble weights sum to {0}, expected exactly 1")]
    WeightSum(String),
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("inequality has no nonzero coefficient")]
    ZeroInequality,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
