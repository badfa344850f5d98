use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A model parameter is outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Sites, radii or site sets that do not fit the requested geometry.
    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("config error at `{path}`: {reason}")]
    Config { path: String, reason: String },

    #[error("grid axes differ: {0}")]
    AxisMismatch(String),

    /// The dynamics would reach the open chain ends within the requested time window.
    #[error("boundary guard: {0}")]
    BoundaryGuard(String),

    #[error("grid cell (delta={delta}, t={t}): {source}")]
    Cell {
        delta: usize,
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors that originate from the filesystem.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io { .. } => true,
            Error::Cell { source, .. } => source.is_io(),
            _ => false,
        }
    }
}
