//! JSON-over-HTTP embedding provider with an on-disk cache.
//!
//! Requests are `POST {endpoint}` with body `{"model": .., "input": [..]}` and
//! an `Authorization: Bearer <key>` header, the key read from the environment
//! variable named in [`ProviderConfig::credential_env`]. The response is a JSON
//! array of float arrays, one per input (an object with
//! `data: [{embedding: [..]}]` is also accepted).
//!
//! Cache entries live in `cache_dir/<sha256(model, 0x00, token)>.json`.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{EmbeddingError, EmbeddingSet, EmbeddingVector};

fn default_max_in_flight() -> usize {
    4
}
fn default_batch_size() -> usize {
    64
}
fn default_max_retries() -> u32 {
    4
}
fn default_backoff_ms() -> u64 {
    200
}
fn default_timeout_secs() -> u64 {
    30
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProviderConfig {
    pub endpoint: String,
    pub model: String,
    /// Name of the environment variable holding the API key.
    pub credential_env: String,
    #[serde(default = "default_max_in_flight")]
    pub max_in_flight: usize,
    pub cache_dir: PathBuf,
    #[serde(default = "default_batch_size")]
    pub batch_size: usize,
    #[serde(default = "default_max_retries")]
    pub max_retries: u32,
    #[serde(default = "default_backoff_ms")]
    pub initial_backoff_ms: u64,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
}

impl ProviderConfig {
    pub fn new(endpoint: impl Into<String>, model: impl Into<String>, credential_env: impl Into<String>, cache_dir: impl Into<PathBuf>) -> Self {
        Self {
            endpoint: endpoint.into(),
            model: model.into(),
            credential_env: credential_env.into(),
            max_in_flight: default_max_in_flight(),
            cache_dir: cache_dir.into(),
            batch_size: default_batch_size(),
            max_retries: default_max_retries(),
            initial_backoff_ms: default_backoff_ms(),
            timeout_secs: default_timeout_secs(),
        }
    }

    pub fn validate(&self) -> Result<(), EmbeddingError> {
        if self.max_in_flight == 0 {
            return Err(EmbeddingError::Config("max_in_flight must be >= 1".into()));
        }
        if self.batch_size == 0 {
            return Err(EmbeddingError::Config("batch_size must be >= 1".into()));
        }
        if self.model.is_empty() {
            return Err(EmbeddingError::Config("model must not be empty".into()));
        }
        Ok(())
    }
}

/// Failure of a single provider request.
#[derive(Debug, Clone, PartialEq)]
pub enum TransportError {
    /// Connection-level failure; retried.
    Network(String),
    /// Non-success HTTP status with the raw response body.
    Status { status: u16, body: String },
    /// Response arrived but could not be interpreted; not retried.
    Malformed(String),
}

impl TransportError {
    fn retryable(&self) -> bool {
        match self {
            Self::Network(_) => true,
            Self::Status { status, .. } => *status == 429 || *status >= 500,
            Self::Malformed(_) => false,
        }
    }
}

/// One round trip to an embedding provider.
pub trait EmbeddingTransport: Send + Sync {
    fn embed(&self, model: &str, inputs: &[String]) -> Result<Vec<Vec<f64>>, TransportError>;
}

#[derive(Serialize)]
struct EmbedRequest<'a> {
    model: &'a str,
    input: &'a [String],
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EmbedResponse {
    Plain(Vec<Vec<f64>>),
    Data { data: Vec<DataItem> },
}

#[derive(Deserialize)]
struct DataItem {
    embedding: Vec<f64>,
}

pub struct HttpTransport {
    endpoint: String,
    api_key: String,
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new(endpoint: impl Into<String>, api_key: impl Into<String>, timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(false)
            .build()
            .into();
        Self {
            endpoint: endpoint.into(),
            api_key: api_key.into(),
            agent,
        }
    }

    /// Reads the credential from the configured environment variable.
    pub fn from_config(config: &ProviderConfig) -> Result<Self, EmbeddingError> {
        let key = std::env::var(&config.credential_env)
            .map_err(|_| EmbeddingError::MissingCredential(config.credential_env.clone()))?;
        Ok(Self::new(
            config.endpoint.clone(),
            key,
            Duration::from_secs(config.timeout_secs),
        ))
    }
}

impl EmbeddingTransport for HttpTransport {
    fn embed(&self, model: &str, inputs: &[String]) -> Result<Vec<Vec<f64>>, TransportError> {
        let mut response = self
            .agent
            .post(&self.endpoint)
            .header("Authorization", &format!("Bearer {}", self.api_key))
            .send_json(EmbedRequest { model, input: inputs })
            .map_err(|e| TransportError::Network(e.to_string()))?;
        let status = response.status().as_u16();
        let body = response
            .body_mut()
            .read_to_string()
            .map_err(|e| TransportError::Network(e.to_string()))?;
        if !(200..300).contains(&status) {
            return Err(TransportError::Status { status, body });
        }
        match serde_json::from_str::<EmbedResponse>(&body) {
            Ok(EmbedResponse::Plain(v)) => Ok(v),
            Ok(EmbedResponse::Data { data }) => Ok(data.into_iter().map(|d| d.embedding).collect()),
            Err(e) => Err(TransportError::Malformed(format!("{e}: {body}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    model: String,
    token: String,
    vector: Vec<f64>,
}

/// Content-addressed vector cache. Reads are lock-free; writes are serialized.
pub struct DiskCache {
    dir: PathBuf,
    write_lock: Mutex<()>,
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self {
            dir: dir.into(),
            write_lock: Mutex::new(()),
        }
    }

    pub fn key(model: &str, token: &str) -> String {
        let mut h = Sha256::new();
        h.update(model.as_bytes());
        h.update([0u8]);
        h.update(token.as_bytes());
        hex::encode(h.finalize())
    }

    pub fn path_for(&self, model: &str, token: &str) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(model, token)))
    }

    pub fn get(&self, model: &str, token: &str) -> Option<Vec<f64>> {
        let raw = fs::read(self.path_for(model, token)).ok()?;
        let entry: CacheEntry = serde_json::from_slice(&raw).ok()?;
        (entry.model == model && entry.token == token).then_some(entry.vector)
    }

    pub fn put(&self, model: &str, token: &str, vector: &[f64]) -> Result<(), EmbeddingError> {
        let _guard = self.write_lock.lock().expect("cache lock poisoned");
        fs::create_dir_all(&self.dir).map_err(|e| EmbeddingError::io(&self.dir, e))?;
        let path = self.path_for(model, token);
        let tmp = path.with_extension("json.tmp");
        let entry = CacheEntry {
            model: model.to_string(),
            token: token.to_string(),
            vector: vector.to_vec(),
        };
        let body = serde_json::to_vec(&entry).map_err(|e| EmbeddingError::Cache(e.to_string()))?;
        fs::write(&tmp, body).map_err(|e| EmbeddingError::io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| EmbeddingError::io(&path, e))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

/// Cached, bounded-concurrency fetcher over any [`EmbeddingTransport`].
pub struct ProviderFetcher {
    config: ProviderConfig,
    transport: Arc<dyn EmbeddingTransport>,
    cache: DiskCache,
    requests: AtomicUsize,
}

impl ProviderFetcher {
    pub fn new(config: ProviderConfig, transport: Arc<dyn EmbeddingTransport>) -> Result<Self, EmbeddingError> {
        config.validate()?;
        let cache = DiskCache::new(config.cache_dir.clone());
        Ok(Self {
            config,
            transport,
            cache,
            requests: AtomicUsize::new(0),
        })
    }

    pub fn config(&self) -> &ProviderConfig {
        &self.config
    }

    /// Number of transport calls issued so far, retries included.
    pub fn requests_made(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }

    pub fn fetch(&self, tokens: &[String]) -> Result<EmbeddingSet, EmbeddingError> {
        if tokens.is_empty() {
            return Err(EmbeddingError::NoTokens);
        }
        let mut seen = HashSet::new();
        let distinct: Vec<&String> = tokens.iter().filter(|t| seen.insert(t.as_str())).collect();

        let model = self.config.model.as_str();
        let mut found: HashMap<String, Vec<f64>> = HashMap::new();
        let mut missing = Vec::new();
        for token in &distinct {
            match self.cache.get(model, token) {
                Some(v) => {
                    found.insert((*token).clone(), v);
                }
                None => missing.push((*token).clone()),
            }
        }

        if !missing.is_empty() {
            let fetched = self.fetch_missing(&missing)?;
            found.extend(fetched);
        }

        let mut set = EmbeddingSet::new(model, 0);
        for token in distinct {
            let values = found.remove(token).expect("every distinct token resolved");
            let vector = EmbeddingVector::new(values)?;
            set.insert(token.clone(), vector)?;
        }
        Ok(set)
    }

    fn fetch_missing(&self, missing: &[String]) -> Result<HashMap<String, Vec<f64>>, EmbeddingError> {
        let batches: Vec<&[String]> = missing.chunks(self.config.batch_size).collect();
        let next = AtomicUsize::new(0);
        let results: Mutex<HashMap<String, Vec<f64>>> = Mutex::new(HashMap::new());
        let first_error: Mutex<Option<EmbeddingError>> = Mutex::new(None);
        let workers = self.config.max_in_flight.min(batches.len());

        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    if first_error.lock().unwrap().is_some() {
                        return;
                    }
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    let Some(batch) = batches.get(i) else { return };
                    match self.fetch_batch(batch) {
                        Ok(pairs) => results.lock().unwrap().extend(pairs),
                        Err(e) => {
                            first_error.lock().unwrap().get_or_insert(e);
                            return;
                        }
                    }
                });
            }
        });

        if let Some(e) = first_error.into_inner().unwrap() {
            return Err(e);
        }
        Ok(results.into_inner().unwrap())
    }

    fn fetch_batch(&self, batch: &[String]) -> Result<Vec<(String, Vec<f64>)>, EmbeddingError> {
        let model = self.config.model.as_str();
        let mut attempt = 0u32;
        let vectors = loop {
            attempt += 1;
            self.requests.fetch_add(1, Ordering::SeqCst);
            match self.transport.embed(model, batch) {
                Ok(v) => break v,
                Err(e) if e.retryable() && attempt <= self.config.max_retries => {
                    let delay = self.config.initial_backoff_ms.saturating_mul(1 << (attempt - 1).min(16));
                    log::warn!("embedding request failed (attempt {attempt}): {e:?}; retrying in {delay} ms");
                    std::thread::sleep(Duration::from_millis(delay));
                }
                Err(TransportError::Status { status, body }) => {
                    return Err(EmbeddingError::Provider { status, body });
                }
                Err(TransportError::Network(reason)) => {
                    return Err(EmbeddingError::Transport { attempts: attempt, reason });
                }
                Err(TransportError::Malformed(reason)) => {
                    return Err(EmbeddingError::Provider { status: 200, body: reason });
                }
            }
        };
        if vectors.len() != batch.len() {
            return Err(EmbeddingError::ResponseLength {
                requested: batch.len(),
                returned: vectors.len(),
            });
        }
        for (token, v) in batch.iter().zip(&vectors) {
            self.cache.put(model, token, v)?;
        }
        Ok(batch.iter().cloned().zip(vectors).collect())
    }
}

/// Fetches embeddings over HTTP per `config`, consulting the cache first.
/// The credential is only required when at least one token misses the cache.
pub fn fetch_embeddings(config: &ProviderConfig, tokens: &[String]) -> Result<EmbeddingSet, EmbeddingError> {
    config.validate()?;
    let cache = DiskCache::new(config.cache_dir.clone());
    let all_cached = tokens.iter().all(|t| cache.get(&config.model, t).is_some());
    let transport: Arc<dyn EmbeddingTransport> = if all_cached && !tokens.is_empty() {
        Arc::new(Unreachable)
    } else {
        Arc::new(HttpTransport::from_config(config)?)
    };
    ProviderFetcher::new(config.clone(), transport)?.fetch(tokens)
}

struct Unreachable;

impl EmbeddingTransport for Unreachable {
    fn embed(&self, _: &str, _: &[String]) -> Result<Vec<Vec<f64>>, TransportError> {
        Err(TransportError::Network("no transport configured".into()))
    }
}
