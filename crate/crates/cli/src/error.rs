use std::path::{Path, PathBuf};

use thiserror::Error;

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] tfd_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("{}: {inner}", path.display())]
    AtPath {
        path: PathBuf,
        #[source]
        inner: Box<HarnessError>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("nothing to plot")]
    EmptyPlot,
}

impl HarnessError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Attaches a file path unless the error already names one.
    pub fn with_path(self, path: &Path) -> Self {
        match self {
            e @ (Self::Io { .. } | Self::AtPath { .. }) => e,
            inner => Self::AtPath {
                path: path.to_path_buf(),
                inner: Box::new(inner),
            },
        }
    }
}
