use thiserror::Error;

/// Errors raised by the geometry kernel, the optimizer and the constructions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero vector where a nonzero Lorentz vector is required")]
    ZeroVector,
    #[error("vector is not normalized as a {expected} (<v,v> = {norm})")]
    NotNormalized { expected: &'static str, norm: f64 },
    #[error("invalid center: {0}")]
    InvalidCenter(String),
    #[error("invalid angles: {0}")]
    InvalidAngles(String),
    #[error("infeasible model: {0}")]
    Infeasible(String),
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("group logarithm undefined (half-turn error frame)")]
    OutOfChart,
    #[error("closure residual {residual:.3e} exceeds tolerance {tolerance:.1e}")]
    NotClosed { residual: f64, tolerance: f64 },
    #[error("jacobian is rank deficient (sigma3/sigma1 = {ratio:.3e})")]
    RankDeficient { ratio: f64 },
    #[error("newton retraction failed after {iterations} iterations (residual {residual:.3e})")]
    ProjectionFailed { iterations: usize, residual: f64 },
    #[error("no descent direction found at boundary point: {0}")]
    NoDescent(String),
    #[error("bracket failure in root finder: {0}")]
    Bracket(String),
    #[error("reconstruction infeasible: {0}")]
    Reconstruction(String),
    #[error("random sampler exhausted after {0} attempts")]
    SamplerExhausted(usize),
    #[error("invalid surface type: {0}")]
    InvalidSurface(String),
    #[error("malformed document: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
