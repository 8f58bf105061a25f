use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("divergent quantity: {0}")]
    Divergence(String),
    #[error("kernel singularity: {0}")]
    Singular(String),
    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("invariant breach: {0}")]
    InvariantBreach(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("fit error: {0}")]
    Fit(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("degenerate nonlinearity: {0}")]
    Degenerate(String),
    #[error("oracle failure: {0}")]
    Oracle(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Shape { expected, got })
    }
}
