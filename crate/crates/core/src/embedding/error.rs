use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("embedding vector is empty")]
    EmptyVector,
    #[error("embedding component {index} is not finite")]
    NonFinite { index: usize },
    #[error("vector has zero norm")]
    ZeroNorm,
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("dimension mismatch for token {token:?}: expected {expected}, got {actual}")]
    TokenDimensionMismatch {
        token: String,
        expected: usize,
        actual: usize,
    },
    #[error("duplicate token {0:?}")]
    DuplicateToken(String),
    #[error("unknown token {0:?}")]
    UnknownToken(String),
    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("bad binary embedding file {path}: {reason}")]
    BadBinary { path: PathBuf, reason: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("k = {k} out of range (allowed 1..={max})")]
    ComponentsOutOfRange { k: usize, max: usize },
    #[error("need at least {needed} entries, got {actual}")]
    TooFewEntries { needed: usize, actual: usize },
    #[error("degenerate input: all vectors identical")]
    Degenerate,
    #[error("empty candidate space")]
    EmptyCandidates,
    #[error("candidate count {count} exceeds cap {cap}")]
    CandidateCap { count: usize, cap: usize },
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("no tokens requested")]
    NoTokens,
    #[error("credential environment variable {0} is not set")]
    MissingCredential(String),
    #[error("provider error (status {status}): {body}")]
    Provider { status: u16, body: String },
    #[error("transport failure after {attempts} attempts: {reason}")]
    Transport { attempts: u32, reason: String },
    #[error("provider returned {returned} vectors for {requested} inputs")]
    ResponseLength { requested: usize, returned: usize },
    #[error("invalid provider config: {0}")]
    Config(String),
    #[error("cache error: {0}")]
    Cache(String),
}

impl EmbeddingError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}
