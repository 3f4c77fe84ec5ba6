//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid parameter set for an operation (bad size, β ≤ 0, sector out of
    /// range, non-ascending histogram edges, ...).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A spectrum has a (near-)zero spacing where a ratio denominator is
    /// needed.
    #[error("degenerate spectrum: zero spacing at level index {index}")]
    DegenerateSpectrum { index: usize },

    /// Eigensolver failed to converge within its iteration budget.
    #[error("eigensolver did not converge after {iterations} iterations (n = {n}, fingerprint = {fingerprint:#018x})")]
    NonConvergence {
        n: usize,
        iterations: usize,
        fingerprint: u64,
    },

    /// Eigensolver failure inside a batch, tagged with the realization index.
    #[error("realization {realization}: {source}")]
    Realization {
        realization: u64,
        #[source]
        source: Box<Error>,
    },

    /// Input matrix failed a structural validation (non-Hermitian, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// Parameters outside the range a closed form or exact reduction supports.
    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    /// Point outside the support of a density.
    #[error("domain error: {0}")]
    Domain(String),

    /// Quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    /// Text spectrum file problems, with 1-based line number where relevant.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}
