use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Dimensions or degrees of the operands do not match.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A combinatorial count does not fit in memory or in a machine integer.
    #[error("size error: {0}")]
    Size(String),

    /// An integrand produced a non-finite value.
    #[error("evaluation error at node {node}: {message}")]
    Evaluation { node: usize, message: String },

    /// An iterative method failed to converge; `best` carries the best value reached.
    #[error("no convergence: {message} (best value {best})")]
    NonConvergence { message: String, best: f64 },

    /// An invalid experiment or CLI configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A malformed input file.
    #[error("parse error in field `{field}`: {message}")]
    Parse { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
