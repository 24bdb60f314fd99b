use std::io;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown or inactive vertex {0}")]
    UnknownVertex(usize),

    #[error("edge ({0}, {1}) is not present in the graph")]
    MissingEdge(usize, usize),

    #[error("invalid edge ({0}, {1}): {2}")]
    InvalidEdge(usize, usize, &'static str),

    #[error("vertex count mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("vertex count must be even, got {0}")]
    OddVertexCount(usize),

    #[error("infeasible generator parameters: {0}")]
    InfeasibleModel(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex {0} has no embedding point")]
    MissingPoint(usize),

    #[error("no cut with both sides at most {limit} vertices exists for {active} active vertices")]
    Unbalanceable { active: usize, limit: f64 },

    #[error("negative budget {budget} on vertex {vertex}")]
    NegativeBudget { vertex: usize, budget: i64 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("eigensolver did not converge")]
    EigenNonConvergence,

    #[error("pieces do not partition the vertex set: {0}")]
    PieceCover(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
