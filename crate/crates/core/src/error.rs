use thiserror::Error;

/// Errors raised by the series, kernel, quadrature and grid routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pochhammer symbol ({a})_{n} hits a pole of the gamma function")]
    PolePochhammer { a: f64, n: i64 },

    #[error("gamma function pole at argument {0}")]
    PoleGamma(f64),

    #[error("series diverges: {0}")]
    DivergentSeries(String),

    #[error("series did not reach tolerance within {limit} terms (partial value {partial})")]
    MaxTermsExceeded { limit: usize, partial: f64 },

    #[error("argument outside the supported domain: {0}")]
    Domain(String),

    #[error("invalid medium parameters: {0}")]
    InvalidParams(String),

    #[error("field point coincides with the source point")]
    CoincidentPoints,

    #[error("tangent vector is not of unit length (|t|^2 = {0})")]
    NonUnitTangent(f64),

    #[error("source point at the origin has no image")]
    OriginSource,

    #[error("point ({x}, {y}) lies outside the quarter disk")]
    OutsideDomain { x: f64, y: f64 },

    #[error("boundary data disagree at corner {corner}: {left} vs {right}")]
    CornerMismatch {
        corner: &'static str,
        left: f64,
        right: f64,
    },

    #[error("quadrature failed to converge: estimate {estimate:e} exceeds allowance {allowed:e}")]
    QuadratureNotConverged { estimate: f64, allowed: f64 },

    #[error("linear system is singular at row {0}")]
    SingularSystem(usize),

    #[error("iterative solver diverged after {0} iterations")]
    IterationDivergence(usize),

    #[error("boundary data: {0}")]
    Data(String),
}

impl Error {
    /// Short machine-readable tag for reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::PolePochhammer { .. } => "PolePochhammer",
            Error::PoleGamma(_) => "PoleGamma",
            Error::DivergentSeries(_) => "DivergentSeries",
            Error::MaxTermsExceeded { .. } => "MaxTermsExceeded",
            Error::Domain(_) => "DomainError",
            Error::InvalidParams(_) => "InvalidParams",
            Error::CoincidentPoints => "CoincidentPoints",
            Error::NonUnitTangent(_) => "NonUnitTangent",
            Error::OriginSource => "OriginSource",
            Error::OutsideDomain { .. } => "OutsideDomain",
            Error::CornerMismatch { .. } => "CornerMismatch",
            Error::QuadratureNotConverged { .. } => "QuadratureNotConverged",
            Error::SingularSystem(_) => "SingularSystem",
            Error::IterationDivergence(_) => "IterationDivergence",
            Error::Data(_) => "DataError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
