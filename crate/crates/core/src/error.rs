use thiserror::Error;

/// Errors raised by the solvers, the oracle and the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("momentum {p} lies outside the open domain |p| < {p_max}")]
    OutsideDomain { p: f64, p_max: f64 },

    #[error("no sign change of f on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    NoRootInBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error(
        "quadrature did not converge: error estimate {estimate:e} after {evaluations} evaluations"
    )]
    QuadratureNotConverged { estimate: f64, evaluations: usize },

    #[error("matrix is not Hermitian: defect {defect:e} exceeds {tolerance:e}")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter {
        name,
        value,
        reason,
    }
}
