use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UmbraError {
    #[error("expected {expected} coefficients for truncation {truncation}, got {got}")]
    LengthMismatch {
        expected: usize,
        got: usize,
        truncation: usize,
    },
    #[error("coefficient {index} is not finite")]
    NonFiniteCoefficient { index: usize },
    #[error("operation needs truncation >= 1")]
    DegenerateTruncation,
    #[error("composition needs val(chi) >= 1")]
    CompositionNotFormallyConvergent,
    #[error("need at least {needed} nonzero coefficients in the window, found {found}")]
    InsufficientData { needed: usize, found: usize },
    #[error("Gamma pole at coefficient index {0}")]
    GammaPoleAtIndex(usize),
    #[error("quadrature did not converge: {0}")]
    QuadratureDivergence(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("Pade pole {pole} lies within {delta} rad of the ray at angle {theta}")]
    PoleOnRay {
        pole: Complex64,
        theta: f64,
        delta: f64,
    },
    #[error("Pade order {order} needs {needed} coefficients, series has {found}")]
    InsufficientCoefficients {
        order: usize,
        needed: usize,
        found: usize,
    },
    #[error("ground state is singular or undefined at mu = {0}")]
    PoleOrOutsideDomain(Complex64),
    #[error("mu must be non-negative, got {0}")]
    NegativeMu(f64),
    #[error("ground state has a pole at term {0}")]
    PoleAtTerm(usize),
    #[error("convergence prediction is not available for {0} ground states")]
    UnsupportedGround(&'static str),
    #[error("Gamma has a pole at {0}")]
    PoleError(Complex64),
    #[error("series did not converge within {0} terms")]
    MaxTermsExceeded(usize),
    #[error("integrand does not decay: {0}")]
    NonDecayingTail(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl UmbraError {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            UmbraError::LengthMismatch { .. } => "LengthMismatch",
            UmbraError::NonFiniteCoefficient { .. } => "NonFiniteCoefficient",
            UmbraError::DegenerateTruncation => "DegenerateTruncation",
            UmbraError::CompositionNotFormallyConvergent => "CompositionNotFormallyConvergent",
            UmbraError::InsufficientData { .. } => "InsufficientData",
            UmbraError::GammaPoleAtIndex(_) => "GammaPoleAtIndex",
            UmbraError::QuadratureDivergence(_) => "QuadratureDivergence",
            UmbraError::DomainError(_) => "DomainError",
            UmbraError::PoleOnRay { .. } => "PoleOnRay",
            UmbraError::InsufficientCoefficients { .. } => "InsufficientCoefficients",
            UmbraError::PoleOrOutsideDomain(_) => "PoleOrOutsideDomain",
            UmbraError::NegativeMu(_) => "NegativeMu",
            UmbraError::PoleAtTerm(_) => "PoleAtTerm",
            UmbraError::UnsupportedGround(_) => "UnsupportedGround",
            UmbraError::PoleError(_) => "PoleError",
            UmbraError::MaxTermsExceeded(_) => "MaxTermsExceeded",
            UmbraError::NonDecayingTail(_) => "NonDecayingTail",
            UmbraError::InvalidArgument(_) => "InvalidArgument",
        }
    }

    /// Malformed input (as opposed to a mathematical obstruction).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            UmbraError::LengthMismatch { .. }
                | UmbraError::NonFiniteCoefficient { .. }
                | UmbraError::InvalidArgument(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, UmbraError>;
