use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NonHermitianInput { deviation: f64 },

    #[error("entropy undefined: spectrum value {value:e} outside [0, 1]")]
    IndeterminateEntropy { value: f64 },

    #[error("argument {value:e} outside the domain [0, 1]")]
    DomainError { value: f64 },

    #[error("quadrature did not reach tolerance {tolerance:e} within {panels} panels (error estimate {estimate:e})")]
    QuadratureFailure {
        tolerance: f64,
        panels: usize,
        estimate: f64,
    },

    #[error("closed-form rate is singular at eta = 1/2 (got eta = {eta})")]
    EtaSingular { eta: f64 },

    #[error("effective rate {gamma:e} is negative at tau = {tau}; survival probability would exceed 1")]
    NegativeRate { tau: f64, gamma: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
