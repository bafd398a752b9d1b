use thiserror::Error;

/// Failures reported by the library. Each variant belongs to one of three
/// broad classes, see [`ErrorClass`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no real stationary phase points at x/t = {xi} (discriminant {discriminant:.6e})")]
    NoRealPhasePoints { xi: f64, discriminant: f64 },

    #[error("accuracy failure in {context}: achieved {achieved:.3e}, required {required:.3e}")]
    Accuracy {
        context: String,
        achieved: f64,
        required: f64,
    },

    #[error("spectral singularity suspected: |s11({z})| = {modulus:.3e}")]
    SpectralSingularitySuspected { z: f64, modulus: f64 },

    #[error("spectrum resolution failed: {0}")]
    SpectrumResolutionFailure(String),

    #[error("soliton linear system is singular (condition estimate {condition:.3e})")]
    SolitonSystemSingular { condition: f64 },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("blow-up detected, last finite state at t = {last_good_t}")]
    BlowupDetected { last_good_t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad arguments, malformed data.
    Input,
    /// A numerical procedure could not reach its target accuracy.
    Accuracy,
    /// The request lies outside the regime the model covers.
    ModelDomain,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidInput(_) => ErrorClass::Input,
            Error::Domain(_) | Error::NoRealPhasePoints { .. } => ErrorClass::ModelDomain,
            Error::Accuracy { .. }
            | Error::SpectralSingularitySuspected { .. }
            | Error::SpectrumResolutionFailure(_)
            | Error::SolitonSystemSingular { .. }
            | Error::Overflow(_)
            | Error::BlowupDetected { .. } => ErrorClass::Accuracy,
        }
    }

    pub(crate) fn accuracy(context: impl Into<String>, achieved: f64, required: f64) -> Self {
        Error::Accuracy {
            context: context.into(),
            achieved,
            required,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
