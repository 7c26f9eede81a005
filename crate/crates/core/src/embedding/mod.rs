//! Real-valued embeddings: containers, file formats, a cached provider
//! client and classical geometry (cosine similarity, PCA, balanced-token scan).

mod error;
mod geometry;
pub mod io;
pub mod provider;
mod scan;
mod set;

pub use error::EmbeddingError;
pub use geometry::{cosine_similarity, pca_project, PcaProjection};
pub use io::{load_embeddings, save_embeddings, EmbeddingFormat};
pub use provider::{fetch_embeddings, EmbeddingTransport, HttpTransport, ProviderConfig, ProviderFetcher};
pub use scan::{
    enumerate_candidates, scan_balanced_tokens, ScanEntry, ScanOptions, ScanReport, VectorSource,
    DEFAULT_CANDIDATE_CAP,
};
pub use set::{EmbeddingSet, EmbeddingVector};
