use thiserror::Error;

/// Failures raised by the numerical kernels and experiment drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("matrix of size {n} exceeds the {kernel} cap of {max}")]
    SizeCap {
        kernel: &'static str,
        n: usize,
        max: usize,
    },

    #[error("hafnian needs an even dimension, got {0}")]
    OddDimension(usize),

    #[error("matrix is not symmetric (max |a_ij - a_ji| = {0:.3e})")]
    NotSymmetric(f64),

    #[error("singular value {value} is outside [0, 1); rescale the matrix first")]
    InvalidSingularValue { value: f64 },

    #[error("zero matrix cannot reach a positive mean photon number")]
    ZeroMatrix,

    #[error("one-sided Jacobi SVD did not converge after {sweeps} sweeps")]
    SvdNoConvergence { sweeps: usize },

    #[error("photon pattern halves carry {s_total} and {t_total} photons")]
    UnbalancedPattern { s_total: usize, t_total: usize },

    #[error("enumeration guard exceeded: {0}")]
    EnumerationGuard(String),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{bound} is not established here: {reason}")]
    OutsideValidityRegion { bound: &'static str, reason: String },

    #[error("covariance blocks violate the uncertainty relation at ({i}, {j})")]
    UncertaintyViolation { i: usize, j: usize },

    #[error("eigenvalue {0} >= 1 does not describe a valid program")]
    InvalidProgram(f64),

    #[error("least-squares design matrix is ill-conditioned (condition number {condition:.3e}, gamma {gamma:.3e}, {nodes} nodes)")]
    IllConditioned {
        condition: f64,
        gamma: f64,
        nodes: usize,
    },

    #[error("|xi| stayed below {threshold:e} after {attempts} resamples")]
    DegenerateXi { threshold: f64, attempts: usize },

    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// Whether the failure comes from caller-supplied parameters rather than from the numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::OutsideValidityRegion { .. }
                | Error::EnumerationGuard(_)
                | Error::DimensionMismatch(_)
                | Error::UnbalancedPattern { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
