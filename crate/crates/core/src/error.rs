use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by model construction, parsing and measurement.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown edge-step family `{0}`")]
    UnknownFamily(String),

    #[error("malformed family descriptor `{descriptor}`: {reason}")]
    MalformedDescriptor { descriptor: String, reason: String },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("exact clique search unavailable: budget of {budget} search nodes exceeded")]
    CliqueBudgetExceeded { budget: u64 },

    #[error("t = {t} exceeds the enumeration cap of {cap}")]
    EnumerationCap { t: usize, cap: usize },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),

    #[error("empty family grid")]
    EmptyGrid,

    #[error("unknown verify suite `{0}`")]
    UnknownSuite(String),

    #[error("cannot access {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
