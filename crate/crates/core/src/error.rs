use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^H| = {max_asymmetry:.3e})")]
    NonHermitian { max_asymmetry: f64 },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error(
        "quadrature did not converge after {evaluations} evaluations \
         (estimate {estimate:.12e}, error bound {error_bound:.3e})"
    )]
    Convergence {
        estimate: f64,
        error_bound: f64,
        evaluations: usize,
    },

    #[error("contour integral has imaginary part {imaginary:.3e} (real part {real:.12e})")]
    ContourIntegrity { real: f64, imaginary: f64 },

    #[error("invalid correlators at delta = {delta}, r = {r}: {reason}")]
    InvalidCorrelator { delta: f64, r: u32, reason: String },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("objective is not finite ({value}) at theta = {theta}, phi = {phi}")]
    Minimizer { theta: f64, phi: f64, value: f64 },

    #[error("no sign change of the indicator in bracket [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("validation failed: {0}")]
    Validation(String),
}
