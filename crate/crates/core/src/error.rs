use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("self-loop on node {node}")]
    SelfLoop { node: usize },

    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("edge ({0}, {1}) is not in the graph")]
    MissingEdge(usize, usize),

    #[error("not a permutation of 0..{n}: {reason}")]
    NotAPermutation { n: usize, reason: String },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("no connected sample after {retries} retries")]
    RetriesExhausted { retries: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("too large for exact enumeration: {what} exceeds budget {budget}")]
    BudgetExceeded { what: &'static str, budget: u64 },

    #[error("shape mismatch: {0}")]
    Shape(String),
}
