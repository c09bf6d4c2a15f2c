use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: cannot split {n} samples into {w} segments")]
    InvalidPartition { n: usize, w: usize },

    #[error("invalid alphabet size {0}: must be in [2, 26]")]
    InvalidAlphabet(usize),

    #[error("symbol index {index} out of range for alphabet of size {alphabet}")]
    InvalidSymbol { index: usize, alphabet: usize },

    #[error("incompatible words: (n={}, w={}, a={}) vs (n={}, w={}, a={})", .left.0, .left.1, .left.2, .right.0, .right.1, .right.2)]
    IncompatibleWords {
        left: (usize, usize, usize),
        right: (usize, usize, usize),
    },

    #[error("probe has {probe} samples, expected {expected}")]
    IncompatibleProbe { probe: usize, expected: usize },

    #[error("invalid time series: {0}")]
    InvalidSeries(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("duplicate acquisition date {0} (days since epoch)")]
    DuplicateDate(i64),

    #[error("value {value} at sample {index} is outside the NDVI range [-1, 1]")]
    OutOfRange { index: usize, value: f64 },

    #[error("negative reflectance {value} at pixel {index}")]
    NegativeReflectance { index: usize, value: f64 },

    #[error("pixel ({x}, {y}) out of bounds for {width}x{height} raster")]
    OutOfBounds {
        x: usize,
        y: usize,
        width: usize,
        height: usize,
    },

    #[error("pixel ({x}, {y}) rejected: {reason}")]
    PixelRejected { x: usize, y: usize, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }
}
