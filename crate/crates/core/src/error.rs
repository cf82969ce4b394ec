use thiserror::Error;

use crate::lp::FractionalSolution;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("no connected draw after {attempts} attempts")]
    ConnectivityFailure { attempts: usize },

    #[error("node {node} out of range for graph with {n} nodes")]
    OutOfRange { node: usize, n: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("degenerate graph: {0}")]
    DegenerateGraph(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The solver ran out of iterations; the best iterate is attached.
    #[error("iteration limit reached after {} iterations", best.iterations)]
    IterationLimit { best: Box<FractionalSolution> },

    #[error("instance has {n} nodes, limit is {max}")]
    SizeLimit { n: usize, max: usize },

    #[error("cannot shrink warm start from {old} to {new} entries")]
    ShrinkNotSupported { old: usize, new: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
