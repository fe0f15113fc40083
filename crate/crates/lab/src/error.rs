use thiserror::Error;
use vdlab_core::CoreError;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("dimension mismatch: expected {expected} values, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("config field `{field}`: {reason}")]
    Config { field: String, reason: String },
    #[error("nonpositive density 1+n = {value:.6e} at grid point {index} (t = {t})")]
    Density { t: f64, index: usize, value: f64 },
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed file at byte {offset}: {reason}")]
    Format { offset: u64, reason: String },
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, LabError>;

impl LabError {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        LabError::Io { context: context.into(), source }
    }

    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        LabError::Config { field: field.into(), reason: reason.into() }
    }

    /// Process exit code: 2 usage/config, 3 runtime state, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Core(_) | LabError::Input(_) | LabError::Dimension { .. } | LabError::Config { .. } => 2,
            LabError::Density { .. } => 3,
            LabError::Io { .. } | LabError::Format { .. } | LabError::Parse { .. } => 4,
        }
    }
}
