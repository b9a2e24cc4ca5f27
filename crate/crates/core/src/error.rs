use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DsdError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("vertex set must be non-empty")]
    EmptyVertexSet,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("instance too large for brute force: n = {n}, limit = {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    #[error("incompatible options: {0}")]
    Incompatible(String),
}

pub type Result<T> = std::result::Result<T, DsdError>;
