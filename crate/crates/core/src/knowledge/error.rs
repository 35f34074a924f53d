use std::path::PathBuf;

use thiserror::Error;

use crate::providers::ProviderError;

#[derive(Debug, Error)]
pub enum KnowledgeError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("document body is empty")]
    EmptyBody,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("index format error: {0}")]
    Format(String),

    #[error("embedding dimension {found} does not match index dimension {expected}")]
    DimMismatch { expected: usize, found: usize },

    #[error(transparent)]
    Provider(#[from] ProviderError),
}

impl KnowledgeError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        KnowledgeError::Io { path: path.into(), source }
    }
}
