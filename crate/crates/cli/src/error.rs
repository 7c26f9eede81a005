use std::path::PathBuf;

use semwave_core::embedding::EmbeddingError;
use semwave_core::interference::InterferenceError;
use semwave_core::potential::PotentialError;
use semwave_core::{GaugeError, GridError, StateError, WaveError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: `{param}`: {reason}")]
    Config { param: String, reason: String },
    #[error("{0}")]
    Usage(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Interference(#[from] InterferenceError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Wave(#[from] WaveError),
    #[error(transparent)]
    Gauge(#[from] GaugeError),
    #[error("{failed} of {total} batch runs failed")]
    Batch { failed: usize, total: usize },
}

impl CliError {
    pub fn config(param: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::Config {
            param: param.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| Self::Io { path, source }
    }

    /// 2 for anything the caller got wrong before work started, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } | Self::Usage(_) => 2,
            _ => 1,
        }
    }
}
