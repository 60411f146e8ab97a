use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite {field} at index {index}")]
    NonFinite { index: usize, field: &'static str },

    #[error("scale factor must be finite, got {0}")]
    NonFiniteScale(f64),

    #[error("length mismatch: {trains} trains but {weights} weights")]
    LengthMismatch { trains: usize, weights: usize },

    #[error("time step must be non-negative, got {0}")]
    NegativeTimeStep(f64),

    #[error("threshold must be positive and finite, got {0}")]
    InvalidThreshold(f64),

    #[error("leak rate must be non-negative, got {0}")]
    InvalidLeakRate(String),

    #[error("value must be finite, got {0}")]
    NonFiniteValue(f64),

    #[error("sample times must be sorted (index {index} goes backwards)")]
    UnsortedSamples { index: usize },

    #[error("box statistics need at least one sample")]
    EmptySamples,

    #[error("invalid experiment config: {0}")]
    Config(String),

    #[error("{path}: row {row}: {message}")]
    Csv {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
