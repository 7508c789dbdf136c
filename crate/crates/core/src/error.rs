use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{func}: argument out of domain ({detail})")]
    Domain { func: &'static str, detail: String },

    #[error("invalid Pearson coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("probability {0} is not in (0, 1)")]
    InvalidProbability(f64),

    #[error("moment of order {order} does not exist (alpha = {alpha})")]
    MomentDoesNotExist { order: u32, alpha: f64 },

    #[error("threshold z = {z} must satisfy 0 < z < b = {b}")]
    ThresholdOutOfRange { z: f64, b: f64 },

    #[error("derivative requested at non-differentiable point x = {0}")]
    EvaluationAtKink(f64),

    #[error("integral did not converge: {0}")]
    NonIntegrable(String),

    #[error("invalid constant: {0}")]
    InvalidConstant(String),

    #[error("unsupported Pearson case: {0}")]
    UnsupportedCase(String),

    #[error("invalid Hermite series: {0}")]
    InvalidSeries(String),

    #[error("x = {0} lies outside the support")]
    OutsideSupport(f64),

    #[error("dominance hypothesis not certified: {0}")]
    UncertifiedHypothesis(String),

    #[error("insufficient range: {0}")]
    InsufficientRange(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}
