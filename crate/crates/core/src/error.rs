use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed point cloud {path}: {len} bytes is not a multiple of 16")]
    MalformedCloud { path: PathBuf, len: u64 },

    #[error("malformed label {path} line {line}: {reason}")]
    MalformedLabel {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("calibration {path} is missing key `{key}`")]
    MissingCalibKey { path: PathBuf, key: String },

    #[error("malformed calibration {path}: {reason}")]
    MalformedCalib { path: PathBuf, reason: String },

    #[error("calibration transform is singular")]
    SingularCalibration,

    #[error("unsupported partition count {0} (expected 2, 4 or 8)")]
    UnsupportedPartitionCount(usize),

    #[error("cannot sample {requested} points from {available}")]
    SampleCount { requested: usize, available: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("split is empty")]
    EmptySplit,

    #[error("fraction {0} outside (0, 1]")]
    InvalidFraction(f64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("unknown frame `{0}`")]
    UnknownFrame(String),

    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
