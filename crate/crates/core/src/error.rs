use thiserror::Error;

/// Errors raised by the certification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertError {
    #[error("{what} = {value} is outside its domain ({expected})")]
    Domain { what: &'static str, value: f64, expected: &'static str },

    #[error("radius {rho} exceeds the maximum valid radius {max_valid_radius}")]
    RadiusExceedsValidity { rho: f64, max_valid_radius: f64 },

    #[error("loss {value} at record {index} lies outside [0, {ceiling}]")]
    LossOutOfRange { index: usize, value: f64, ceiling: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("solver disagreement: {0}")]
    SolverDiagnostic(String),

    #[error("training diverged at step {step}")]
    TrainingDiverged { step: usize },
}

pub type Result<T, E = CertError> = std::result::Result<T, E>;

pub(crate) fn domain(what: &'static str, value: f64, expected: &'static str) -> CertError {
    CertError::Domain { what, value, expected }
}
