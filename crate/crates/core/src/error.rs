use thiserror::Error;

/// Errors reported by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix or vector had the wrong shape for the requested operation.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A dimension argument was below the smallest meaningful value.
    #[error("dimension must be at least {min}, got {got}")]
    InvalidDimension { min: usize, got: usize },

    /// An operation that requires a Hermitian matrix received one that is not.
    #[error("matrix is not Hermitian (max deviation {dev:.3e})")]
    NotHermitian { dev: f64 },

    /// A scalar parameter was outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A density matrix violated positivity, unit trace, or Hermiticity.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// The fixed-step integrator lost the trace beyond its tolerance.
    /// Re-running with a smaller step is the intended remedy.
    #[error("integration unstable at tau = {tau:.6}: |trace - 1| = {dev:.3e}; reduce dt")]
    StepInstability { tau: f64, dev: f64 },

    /// The Liouvillian null space has more than one dimension, so no unique
    /// steady state exists.
    #[error("steady state is not unique: null space dimension {0}")]
    DegenerateSteadyState(usize),

    /// The steady-state solve finished but the residual stayed above bound.
    #[error("steady-state solve did not converge (residual {0:.3e})")]
    SteadyStateResidual(f64),

    /// Every sample of a batch evaluation failed, leaving nothing to rank.
    #[error("all {0} samples failed to evaluate")]
    NoUsableSamples(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
