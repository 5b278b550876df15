use thiserror::Error;

/// Errors raised anywhere in the spline / trimming / spectral pipeline.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid degree {0}: must be at least 1")]
    InvalidDegree(usize),

    #[error("smoothness k = {k} is out of range for degree {degree} (need 0 <= k <= p - 1)")]
    InvalidSmoothness { degree: usize, k: i64 },

    #[error("breakpoints must be strictly increasing with at least two entries")]
    InvalidBreakpoints,

    #[error("knot multiplicity {multiplicity} at breakpoint {index} is outside [1, {degree}]")]
    InvalidMultiplicity {
        index: usize,
        multiplicity: usize,
        degree: usize,
    },

    #[error("index {index} out of range (size {size})")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("point {0} lies outside the parametric domain")]
    OutsideDomain(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("the physical domain does not intersect the fictitious domain")]
    EmptyDomain,

    #[error("active element {0} has no integration cells")]
    MissingCells(usize),

    #[error("lumped mass entry {index} is not positive ({value:e})")]
    NonPositiveMass { index: usize, value: f64 },

    #[error("Dirichlet condition requested on trimmed side `{0}`")]
    TrimmedDirichletSide(String),

    #[error("matrix is not symmetric (defect {defect:e} relative to norm {norm:e})")]
    NotSymmetric { defect: f64, norm: f64 },

    #[error("Cholesky factorization failed: mass matrix numerically singular (diagonal ratio {condition_estimate:e})")]
    CholeskyFailed { condition_estimate: f64 },

    #[error("eigensolver failed to converge")]
    EigenFailed,

    #[error("kernel check failed: |K 1| = {residual:e} exceeds tolerance {tolerance:e}")]
    KernelCheck { residual: f64, tolerance: f64 },

    #[error("critical time step needs a positive eigenvalue, got {0:e}")]
    NonPositiveEigenvalue(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("at delta = {delta:e}: {source}")]
    AtDelta {
        delta: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }
}
