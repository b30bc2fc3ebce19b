use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid identifier {text:?}: {reason}")]
    InvalidIdentifier { text: String, reason: &'static str },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported format {0:?}")]
    UnsupportedFormat(String),

    #[error("lexicon: {0}")]
    Lexicon(String),

    #[error("catalog: {0}")]
    Catalog(String),

    #[error("relations: {0}")]
    Relations(String),

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
