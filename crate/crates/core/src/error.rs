use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),

    #[error("invalid scalarization order {0}: p must be >= 1")]
    InvalidOrder(f64),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("non-finite input at coordinate {0}")]
    NonFiniteInput(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite scalarization value for agent {agent}")]
    NonFiniteScalarization { agent: usize },

    #[error("unknown problem `{0}` (expected one of: problem1, deb2dk, uf4, uf7)")]
    UnknownProblem(String),

    #[error("oracle: {0}")]
    Oracle(String),

    #[error("no front information available for problem `{0}`")]
    NoFront(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("metric: {0}")]
    Metric(String),

    #[error("iteration {iteration}: {source}")]
    Step {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("run {run}: {source}")]
    Run {
        run: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("missing required key `{0}`")]
    MissingKey(&'static str),

    #[error("line {line}, key `{key}`: {message}")]
    Parse {
        line: usize,
        key: String,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}
