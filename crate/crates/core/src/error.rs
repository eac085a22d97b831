use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("eigen-solver did not converge")]
    EigenSolver,
    #[error("missing envelope parameter `{0}`")]
    MissingParameter(&'static str),
    #[error("inconsistent parameters: {0}")]
    Inconsistent(&'static str),
    #[error("insufficient data: {0}")]
    InsufficientData(&'static str),
    #[error("refused: {0}")]
    Refused(&'static str),
    #[error("log-domain overflow")]
    Overflow,
}
