use thiserror::Error;

/// Errors raised by the Gaussian-state, Dicke-model and estimation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid mode selection: {0}")]
    InvalidModes(String),

    #[error("covariance matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("unphysical state: {0}")]
    Unphysical(String),

    #[error("singular covariance matrix (determinant {0:e})")]
    SingularCovariance(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("coupling {lambda} lies within {window:e} of the critical point {lambda_c}")]
    CriticalPointSingularity {
        lambda: f64,
        lambda_c: f64,
        window: f64,
    },

    #[error("finite-difference stencil around {lambda} with step {step:e} reaches the critical point {lambda_c}")]
    StepCrossesCriticalPoint {
        lambda: f64,
        step: f64,
        lambda_c: f64,
    },

    #[error("covariance matrix is not diagonal (off-diagonal {0:e})")]
    NonDiagonal(f64),

    #[error("power-law fit: {0}")]
    InsufficientSamples(String),

    #[error("photon-number cutoff exceeded the hard limit {limit}")]
    CutoffOverflow { limit: usize },

    #[error("photon-number series broke down at n = {n} (p = {value:e})")]
    NumericalBreakdown { n: usize, value: f64 },

    #[error("series not converged at n_max = {n_max} (tail {tail:e})")]
    NonConvergedSeries { n_max: usize, tail: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
