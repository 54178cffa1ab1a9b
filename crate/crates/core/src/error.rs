use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument violates the documented domain of an operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The Zolotarev parameter lies outside `[-sigma_n, sigma_n]`.
    #[error("theta = {theta} outside [-{sigma_n}, {sigma_n}]")]
    ThetaOutOfRange { theta: f64, sigma_n: f64 },

    /// The derivative has no zero (or too few zeros) where one is required.
    #[error("no root: {0}")]
    NoRoot(String),

    /// Newton iteration for the proper Zolotarev system failed.
    #[error("Newton iteration did not converge for n = {n}, theta = {theta}: residual {residual:e} after {iterations} iterations")]
    NewtonFailed {
        n: usize,
        theta: f64,
        residual: f64,
        iterations: usize,
    },

    /// A bisection did not start from a sign change.
    #[error("root is not bracketed: {0}")]
    NotBracketed(String),

    /// The LP solver hit an internal inconsistency.
    #[error("linear program failed: {0}")]
    Lp(String),

    /// A half-line witness could not be certified.
    #[error("witness for (n = {n}, m = {m}) not certified: {detail}")]
    WitnessNotCertified { n: usize, m: usize, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
