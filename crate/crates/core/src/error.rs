use thiserror::Error;

/// Errors raised by the per-mode kernels. All of them are input errors.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },
    #[error("negative time {0} is not allowed for a forward semigroup")]
    NegativeTime(f64),
    #[error("sample |ξ| = {value} lies outside the admissible region {region}")]
    SampleOutOfRegion { value: f64, region: &'static str },
    #[error("empty sample set")]
    EmptySamples,
    #[error("fit needs at least {needed} samples in the window, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("nonpositive value {value} at t = {t}; a log fit is undefined")]
    NonPositiveValue { t: f64, value: f64 },
    #[error("unknown norm `{0}`")]
    UnknownNorm(alloc::string::String),
}

pub type Result<T> = core::result::Result<T, CoreError>;
