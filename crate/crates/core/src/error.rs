use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m - m^dagger| = {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix norm {norm:.3e} exceeds the exponential bound {bound:.3e}")]
    Overflow { norm: f64, bound: f64 },

    #[error("adaptive quadrature exhausted {limit} subdivisions (estimate {value:.6e} +/- {error:.3e})")]
    MaxSubdivisions { limit: usize, value: f64, error: f64 },

    #[error("non-finite value encountered at {at}")]
    NonFinite { at: f64 },

    #[error("ODE step size underflow at t = {t} (h = {h:.3e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("ODE solver exceeded {limit} steps before t = {t}")]
    MaxSteps { limit: usize, t: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("kossakowski matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("not a density matrix: {reason}")]
    NotDensityMatrix { reason: String },

    #[error("invariant violated at t = {t}: {what} drift {drift:.3e}")]
    InvariantViolation { t: f64, what: &'static str, drift: f64 },

    #[error("negative frequency {omega}")]
    NegativeFrequency { omega: f64 },

    #[error("momentum transfer q must be nonzero")]
    ZeroMomentumTransfer,

    #[error("quadrature nodes do not resolve the momentum-transfer law: {reason}")]
    QuadratureSupport { reason: String },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
