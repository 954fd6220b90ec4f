use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Dynkin factor {letter}{rank}: {reason}")]
    InvalidFactor { letter: char, rank: usize, reason: String },

    #[error("cannot parse system string {0:?}")]
    BadSystemString(String),

    #[error("cannot parse weight string {0:?}: {1}")]
    BadWeightString(String, String),

    #[error("weight is not dominant: {0}")]
    NotDominant(String),

    #[error("module dimension {dim} exceeds ceiling {ceiling}")]
    DimensionCeiling { dim: u64, ceiling: u64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unknown basis label {0}")]
    UnknownLabel(String),

    #[error("word is not reduced at position {0}")]
    NotReduced(usize),

    #[error("node index {node} out of range for rank {rank}")]
    BadNode { node: usize, rank: usize },

    #[error("cost guard exceeded: {0}")]
    CostGuard(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
