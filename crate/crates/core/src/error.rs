use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("gamma = {gamma} is not above the coercivity threshold {threshold}")]
    Threshold { gamma: f64, threshold: f64 },
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error("grid error: {0}")]
    Grid(String),
    #[error("operator not positive definite (smallest eigenvalue {min_eig:e})")]
    NotCoercive { min_eig: f64 },
    #[error("singular system: {0}")]
    Singular(String),
}
