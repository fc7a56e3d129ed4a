use num_complex::Complex64;
use thiserror::Error;

/// Failures of the approximation pipelines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApproxError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("target is not in the admissible class: {0}")]
    NotMember(String),

    #[error("sample point {z} lies on a pole (distance {distance:e})")]
    SampleHitsPole { z: Complex64, distance: f64 },

    #[error("degree cap {cap} exceeded: {reason}")]
    DegreeCap { cap: usize, reason: String },

    #[error("no dilation radius passed after {steps} steps (last sup {last_sup:.3e}, needed < {needed:.3e})")]
    DilationFailed { steps: usize, last_sup: f64, needed: f64 },

    #[error("verification failed: grid error {achieved:.6e} is not below eps {eps:.6e}")]
    VerificationFailed { achieved: f64, eps: f64 },

    #[error("every sample exceeds the clipping radius; use the constant-infinity fast path")]
    AllOverThreshold,

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl ApproxError {
    /// Stable machine-readable tag used in error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            ApproxError::InvalidInput(_) => "invalid_input",
            ApproxError::NotMember(_) => "not_member",
            ApproxError::SampleHitsPole { .. } => "sample_hits_pole",
            ApproxError::DegreeCap { .. } => "degree_cap",
            ApproxError::DilationFailed { .. } => "dilation_failed",
            ApproxError::VerificationFailed { .. } => "verification_failed",
            ApproxError::AllOverThreshold => "all_over_threshold",
            ApproxError::Unsupported(_) => "unsupported",
        }
    }

    /// Input-validation problems, as opposed to failures of a well-posed approximation.
    pub fn is_validation(&self) -> bool {
        matches!(self, ApproxError::InvalidInput(_))
    }
}

pub type Result<T> = std::result::Result<T, ApproxError>;
