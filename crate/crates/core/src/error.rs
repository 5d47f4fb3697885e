use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("duplicate point indices {0:?}")]
    DuplicateIndices(Vec<usize>),

    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid edge ordering: {0}")]
    InvalidOrdering(String),

    #[error("invalid merge log: {0}")]
    InvalidMergeLog(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("clusters overlap at vertex {0}")]
    OverlappingClusters(usize),

    #[error("step {t} out of range 0..={max}")]
    StepOutOfRange { t: usize, max: usize },

    #[error("input is not an ultrametric: {0}")]
    NotUltrametric(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("exact enumeration of {count} tuples exceeds the limit of {limit}; use sampling")]
    ExactTooLarge { count: u64, limit: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
