use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("density {0} is outside [0, 1]")]
    InvalidDensity(f64),
    #[error("no connected graph found in {attempts} attempts starting at seed {seed}")]
    SeedsExhausted { seed: u64, attempts: u32 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex ids must be exactly 0..n to use this format")]
    NonContiguousIds,
    #[error("graph has {size} vertices, brute force is limited to {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("penalty constants must satisfy 0 < A < B (got A={a}, B={b})")]
    InvalidPenalty { a: f64, b: f64 },
    #[error("assignment has no value for variable {0}")]
    MissingVariable(VertexId),

    #[error("cutoff must be at least 1")]
    InvalidCutoff,

    #[error("hardware grid parameter must be at least 1")]
    InvalidGrid,
    #[error("clique of size {n} does not fit: capacity is {capacity}")]
    EmbeddingTooLarge { n: usize, capacity: usize },
    #[error("sub-grid at ({row}, {col}) of size {size} lies outside the {m}x{m} grid")]
    OutOfBounds { row: usize, col: usize, size: usize, m: usize },
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("no physical coupler joins the chains of logical variables {0} and {1}")]
    MissingCoupler(VertexId, VertexId),
    #[error("num_reads and sweeps must be at least 1")]
    InvalidSamplerSettings,

    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
