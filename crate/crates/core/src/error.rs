use thiserror::Error;

/// Errors raised across the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("functions or masks live on different grids")]
    GridMismatch,

    #[error("empty set: {0}")]
    EmptySet(String),

    #[error("mask touches the outermost grid layer: {0}")]
    BoundaryContact(String),

    #[error("masks are not nested: {0}")]
    NotNested(String),

    #[error("iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("normalization constant mismatch: closed form {closed_form} vs quadrature {quadrature}")]
    NormalizationMismatch { closed_form: f64, quadrature: f64 },

    #[error("no cone direction certified at ({}, {})", .0[0], .0[1])]
    MissingCone([f64; 2]),

    #[error("construction invariant violated: {0}")]
    Invariant(String),

    #[error("rank-deficient basis: {0}")]
    RankDeficient(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
