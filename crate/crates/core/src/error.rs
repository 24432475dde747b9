use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {0}: only 2 or 3 strategies are supported")]
    UnsupportedDimension(usize),

    #[error("invalid payoff matrix: {0}")]
    InvalidPayoff(String),

    #[error("invalid mixed strategy: {0}")]
    InvalidStrategy(String),

    #[error("invalid state weights: {0}")]
    InvalidWeights(String),

    #[error("invalid operator set: {0}")]
    InvalidOperators(String),

    #[error("invasion share must lie in (0, 1), got {0}")]
    EpsilonOutOfRange(f64),

    #[error("equilibrium {x_star} is too close to the boundary for perturbation {perturbation}")]
    NearBoundary { x_star: f64, perturbation: f64 },

    #[error("invalid dynamics parameter: {0}")]
    InvalidDynamics(String),

    #[error("scan resolution must be at least 2, got {0}")]
    InvalidResolution(usize),

    #[error("scan grid is empty")]
    EmptyGrid,
}
