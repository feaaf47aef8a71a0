use thiserror::Error;

/// Errors raised by the numerics, the samplers and the command-line surface.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge within {terms} terms")]
    NonConvergent { terms: usize },

    #[error("invalid hypergeometric parameters: {0}")]
    InvalidParameters(String),

    #[error("integration on [{a}, {b}] did not converge after {subdivisions} subdivisions (error estimate {error_estimate:e})")]
    QuadratureNonConvergent {
        a: f64,
        b: f64,
        subdivisions: usize,
        error_estimate: f64,
    },

    #[error("accuracy loss in {context}: {digits:.1} digits cancelled")]
    AccuracyLoss { context: String, digits: f64 },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("eigenvalue table needs more than {cap} entries (residual mass {residual:e})")]
    BudgetExceeded { cap: usize, residual: f64 },

    #[error("sampling density exceeded its envelope after {rebuilds} rebuilds")]
    EnvelopeViolation { rebuilds: usize },

    #[error("need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::NonConvergent { .. } => "non_convergent",
            Error::InvalidParameters(_) => "invalid_parameters",
            Error::QuadratureNonConvergent { .. } => "quadrature_non_convergent",
            Error::AccuracyLoss { .. } => "accuracy_loss",
            Error::Overflow(_) => "overflow",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::EnvelopeViolation { .. } => "envelope_violation",
            Error::InsufficientData { .. } => "insufficient_data",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
