use thiserror::Error;

/// Errors raised by graph construction, polynomial arithmetic, cover handling
/// and the analysis routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid theta spec: {0}")]
    InvalidSpec(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("{0} is not an edge of the graph")]
    BadEdge(String),
    #[error("index {index} is outside 1..={max}")]
    BadIndex { index: usize, max: usize },
    #[error("invalid center `{0}`: removing its edges leaves a cycle")]
    InvalidCenter(String),
    #[error("polynomial division leaves a nonzero remainder")]
    InexactDivision,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("fold {fold} is smaller than the number of partition parts ({parts})")]
    FoldTooSmall { fold: usize, parts: usize },
    #[error("standing assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
