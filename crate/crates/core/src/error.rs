use thiserror::Error;

use crate::C64;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DulacError {
    #[error("coefficient of x^{n} y^{m} violates the support requirement (n >= {a})")]
    InvalidSupport { n: usize, m: usize, a: u32 },

    #[error("resonant support covers n <= {support_n_max}, series needs n <= {series_n_max}")]
    SupportRange {
        support_n_max: usize,
        series_n_max: usize,
    },

    #[error("condition (R) violated: ||R|| rho^a = {value} >= 1")]
    ConditionR { value: f64 },

    #[error("wrong case: {0}")]
    WrongCase(String),

    #[error("path construction failed: {0}")]
    PathConstruction(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported eigenvalue ratio {0}: lambda must not be a non-negative real")]
    UnsupportedRatio(C64),

    #[error("internal consistency error: {0}")]
    InternalConsistency(String),

    #[error("asymptotic verdict refused: Re(a + 1/lambda) = {value} is not strictly positive")]
    AsymptoticsRefused { value: f64 },

    #[error("lift failed ({status}) at z = {z}, w = {w}")]
    Lift { status: String, z: C64, w: C64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, DulacError>;
