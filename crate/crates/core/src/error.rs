use thiserror::Error;

/// Failures surfaced by the library. Every operation is otherwise total.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("law is not strictly stable")]
    NotStrictlyStable,
    #[error("target convention requires alpha = 1 (got {0})")]
    AlphaMismatch(f64),
    #[error("|theta| = 1 at alpha = 1 yields a degenerate distribution")]
    DegenerateTheta,
    #[error("law is not spectrally positive: the Laplace transform is infinite for t > 0")]
    NotSpectrallyPositive,
    #[error("scale factor must be positive (got {0})")]
    NonpositiveScale(f64),
    #[error("centering function is not admissible for this Levy measure")]
    InvalidH,
    #[error("triples use different centering functions")]
    HMismatch,
    #[error("quadrature did not reach tolerance (estimate {estimate:e})")]
    QuadratureFailure { estimate: f64 },
    #[error("operation not supported for this measure variant")]
    UnsupportedVariant,
    #[error("argument out of range: {0}")]
    RangeError(String),
    #[error("neither series nor inversion reached tolerance (estimate {estimate:e})")]
    ConvergenceFailure { estimate: f64 },
    #[error("characteristic function expansion did not stabilise")]
    FitDiverged,
    #[error("unknown example model: {0}")]
    UnknownExample(String),
    #[error("Levy measure violates the integrability required for this integral")]
    IntegrabilityError,
}

pub type Result<V> = std::result::Result<V, Error>;

impl Error {
    /// Stable machine-readable name, used by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::NotStrictlyStable => "NotStrictlyStable",
            Error::AlphaMismatch(_) => "AlphaMismatch",
            Error::DegenerateTheta => "DegenerateTheta",
            Error::NotSpectrallyPositive => "NotSpectrallyPositive",
            Error::NonpositiveScale(_) => "NonpositiveScale",
            Error::InvalidH => "InvalidH",
            Error::HMismatch => "HMismatch",
            Error::QuadratureFailure { .. } => "QuadratureFailure",
            Error::UnsupportedVariant => "UnsupportedVariant",
            Error::RangeError(_) => "RangeError",
            Error::ConvergenceFailure { .. } => "ConvergenceFailure",
            Error::FitDiverged => "FitDiverged",
            Error::UnknownExample(_) => "UnknownExample",
            Error::IntegrabilityError => "IntegrabilityError",
        }
    }
}
