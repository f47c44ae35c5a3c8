use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lambda out of domain: {0} (require |lambda| < 1)")]
    LambdaOutOfDomain(f64),
    #[error("beta out of domain: {0} (require |beta| < 1)")]
    BetaOutOfDomain(f64),
    #[error("omega must be positive and finite, got {0}")]
    NonPositiveOmega(f64),
    #[error("degenerate unperturbed spectrum: diagonal coefficient h_d is zero")]
    DegenerateUnperturbed,
    #[error("perturbation order must be at least 1")]
    ZeroOrder,
    #[error("spectrum extraction requires triangular branch (matrix structure is {0})")]
    NotTriangular(String),
    #[error("dimension mismatch: expected at least {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("level {level} outside truncation of dimension {dim}")]
    LevelOutOfRange { level: usize, dim: usize },
    #[error("functions live at different frequencies ({0} vs {1})")]
    OmegaMismatch(f64, f64),
    #[error("quadrature rule needs at least one node")]
    EmptyQuadrature,
    #[error("square-root argument s0^2 - 4 s1 s2 = {0} is not positive")]
    NonRealSpectrum(f64),
    #[error("shift term needs an explicit denominator reading when s3 or s4 is nonzero")]
    AmbiguousShiftDenominator,
    #[error("shift-term denominator vanishes")]
    ZeroShiftDenominator,
    #[error("grid needs at least two points and min < max")]
    InvalidGrid,
}

pub type Result<T> = std::result::Result<T, Error>;
