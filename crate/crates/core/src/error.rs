use thiserror::Error;

/// Errors produced while loading graphs or running solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: i64 },

    #[error("input contains no edges")]
    EmptyInput,

    #[error("{what}: size {actual} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("negative node gain {gain} for node {node}")]
    NegativeGain { node: u32, gain: f64 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
