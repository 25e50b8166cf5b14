use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symmetric positive definite")]
    NotSpd,
    #[error("determinant {det} is not positive")]
    NonPositiveDeterminant { det: f64 },
    #[error("state area {area} is below the pure-state value 1")]
    UnphysicalState { area: f64 },
    #[error("dispersion matrix is singular")]
    SingularSigma,
    #[error("diffusion matrix is singular (det = {det})")]
    SingularDiffusion { det: f64 },
    #[error("drift matrix is not Hurwitz")]
    NotStable,
    #[error("stationary covariance system is numerically singular")]
    SingularSystem,
    #[error("time step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("dispersion matrix lost positive definiteness (smallest eigenvalue {min_eigenvalue})")]
    LostPositivity { min_eigenvalue: f64 },
    #[error("integration failed at t = {time}: smallest eigenvalue {min_eigenvalue}")]
    IntegrationFailure { time: f64, min_eigenvalue: f64 },
    #[error("anisotropy {d} lies outside the squeezing range ({lo}, {hi})")]
    Bracket { d: f64, lo: f64, hi: f64 },
    #[error("quadrature box of {0} standard deviations is too small (need at least 6)")]
    BoxTooSmall(f64),
    #[error("sample index {index} is not interior to a trajectory of {len} samples")]
    IndexOutOfRange { index: usize, len: usize },
}
