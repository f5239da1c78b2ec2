use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {0:?} has fewer than three points")]
    LineTooShort(Vec<u8>),
    #[error("lines {0:?} and {1:?} share two or more points")]
    LinesShareTwoPoints(Vec<u8>, Vec<u8>),
    #[error("label {label} is outside 1..={d}")]
    LabelOutOfRange { label: i64, d: usize },
    #[error("ground sets differ: {0} vs {1}")]
    GroundSetMismatch(usize, usize),
    #[error("point {0} is already a loop")]
    AlreadyLoop(u8),
    #[error("operation needs rank 3, found rank {0}")]
    RankTooLow(u8),
    #[error("inconsistent formula: {0}")]
    InconsistentFormula(String),
    #[error("closed line system still has two edges meeting in two or more classes")]
    PropertyXViolated,
    #[error("triple {0:?} is already dependent")]
    AlreadyDependent(Vec<u8>),
    #[error("ground set of size {d} exceeds the supported maximum of {max}")]
    GroundSetTooLarge { d: usize, max: usize },
    #[error("member {0:?} of X is not a triple")]
    XMemberNotTriple(Vec<u8>),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("depth limit {0} reached with unprocessed circuit varieties")]
    DepthExhausted(usize),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("validation error: {0}")]
    ValidationError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
