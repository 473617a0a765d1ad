use thiserror::Error;

/// Errors raised by the interpolation library.
///
/// Variants are grouped into input-validation failures and numerical
/// failures; see [`Error::is_numerical`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("nodal system validation failed: {0}")]
    Validation(String),

    #[error("quadrature did not converge: {0}")]
    Convergence(String),

    #[error("measure is not valid: {0}")]
    InvalidMeasure(String),

    #[error("measure assumption violated: {0}")]
    MeasureAssumptionViolated(String),

    #[error("degenerate zeros: {0}")]
    Degeneracy(String),

    #[error("eigenvalue iteration failed: {0}")]
    RootFinding(String),

    #[error("conjugate symmetry violated: {0}")]
    Symmetry(String),

    #[error("endpoint variant mismatch: {0}")]
    Variant(String),

    #[error("degenerate angle: {0}")]
    DegenerateAngle(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of a numerical procedure (root finder, quadrature,
    /// symmetry checks) as opposed to rejected inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence(_)
                | Error::MeasureAssumptionViolated(_)
                | Error::Degeneracy(_)
                | Error::RootFinding(_)
                | Error::Symmetry(_)
                | Error::Variant(_)
                | Error::DegenerateAngle(_)
        )
    }

    /// Name of the library module whose contract failed (`input` for
    /// argument checks shared by all modules).
    pub fn module(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "input",
            Error::Domain(_) => "laurent",
            Error::Validation(_) => "nodal",
            Error::Convergence(_)
            | Error::InvalidMeasure(_)
            | Error::MeasureAssumptionViolated(_)
            | Error::Degeneracy(_)
            | Error::RootFinding(_) => "opuc",
            Error::Symmetry(_) | Error::Variant(_) | Error::DegenerateAngle(_) => "transforms",
            Error::Io(_) | Error::Parse(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
