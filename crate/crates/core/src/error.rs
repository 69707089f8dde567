use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid experiment or model parameters.
    #[error("configuration error: {0}")]
    Config(String),

    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two candidate maximizers with exactly equal value.
    #[error("tie between predecessors at ({b}, {c})")]
    Tie { b: usize, c: usize },

    /// Input data violates a structural invariant.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// A construction needed more of a finite grid than was available.
    #[error("truncation: {0}")]
    Truncation(String),

    /// Requested size exceeds what is tractable here.
    #[error("resource bound exceeded: {0}")]
    Resource(String),

    /// Exact evaluation hit a zero denominator.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// Something that should have been a bijection was not.
    #[error("construction error: {0}")]
    Construction(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
