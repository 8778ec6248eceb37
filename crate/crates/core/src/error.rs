//! Error type shared by all numerical routines in this crate.

use thiserror::Error;

/// Failure modes of the susceptibility, relaxation, harmonic-balance and
/// Hilbert-transform routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    /// A parameter or sample array failed validation before any computation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An iterative routine failed to reach its convergence criterion.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// The probe-response denominator vanished on the real frequency axis;
    /// the parameters are marginal or unstable.
    #[error("probe response pole on the real frequency axis (marginal parameters)")]
    PoleOnRealAxis,

    /// The harmonic-balance linear system is numerically singular.
    #[error("harmonic-balance system is numerically singular")]
    SingularSystem,

    /// A Hilbert-transform evaluation point fell outside the central 60% of
    /// the sample window, where edge truncation dominates the result.
    #[error("evaluation point {0} outside the central 60% of the sample window")]
    EdgeEvaluation(f64),

    /// The power-law tail fitted to the outer samples does not describe them;
    /// the sample window is too narrow for tail-corrected quadrature.
    #[error("tail fit misfit {misfit:.1}% exceeds 20%; widen the sample window")]
    BadTailFit {
        /// Relative L2 misfit of the fitted tail model, in percent.
        misfit: f64,
    },
}

impl CoreError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        CoreError::InvalidInput(msg.into())
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, CoreError>;

/// Validates that `value` is finite, returning it on success.
pub(crate) fn require_finite(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(CoreError::invalid(format!(
            "{name} must be finite, got {value}"
        )))
    }
}

/// Validates that `value` is finite and strictly positive.
pub(crate) fn require_positive(name: &str, value: f64) -> Result<f64> {
    require_finite(name, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(CoreError::invalid(format!(
            "{name} must be > 0, got {value}"
        )))
    }
}

/// Validates that `value` is finite and non-negative.
pub(crate) fn require_non_negative(name: &str, value: f64) -> Result<f64> {
    require_finite(name, value)?;
    if value >= 0.0 {
        Ok(value)
    } else {
        Err(CoreError::invalid(format!(
            "{name} must be >= 0, got {value}"
        )))
    }
}
