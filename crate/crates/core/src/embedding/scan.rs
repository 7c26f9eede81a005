//! Exhaustive search for strings equally similar to two target tokens.

use super::{cosine_similarity, EmbeddingError, EmbeddingSet, EmbeddingVector, ProviderFetcher};

pub const DEFAULT_CANDIDATE_CAP: usize = 500_000;

/// Anything that can turn tokens into vectors. Unknown tokens resolve to `None`.
pub trait VectorSource {
    fn resolve(&self, tokens: &[String]) -> Result<Vec<Option<EmbeddingVector>>, EmbeddingError>;
}

impl VectorSource for EmbeddingSet {
    fn resolve(&self, tokens: &[String]) -> Result<Vec<Option<EmbeddingVector>>, EmbeddingError> {
        Ok(tokens.iter().map(|t| self.get(t).cloned()).collect())
    }
}

impl VectorSource for ProviderFetcher {
    fn resolve(&self, tokens: &[String]) -> Result<Vec<Option<EmbeddingVector>>, EmbeddingError> {
        let set = self.fetch(tokens)?;
        Ok(tokens.iter().map(|t| set.get(t).cloned()).collect())
    }
}

#[derive(Debug, Clone)]
pub struct ScanOptions {
    pub alphabet: Vec<char>,
    pub max_len: usize,
    pub cap: usize,
}

impl ScanOptions {
    pub fn new(alphabet: &str, max_len: usize) -> Self {
        Self {
            alphabet: alphabet.chars().collect(),
            max_len,
            cap: DEFAULT_CANDIDATE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanEntry {
    pub candidate: String,
    /// `|S_C(candidate, a) - S_C(candidate, b)|`
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    /// Ascending by `delta`; ties keep enumeration order.
    pub entries: Vec<ScanEntry>,
    /// `(length, best entry of that length)` for every length with a candidate.
    pub best_per_length: Vec<(usize, ScanEntry)>,
}

/// All strings over `alphabet` of length `1..=max_len`, shorter first, each
/// length in lexicographic order of the alphabet as given.
pub fn enumerate_candidates(alphabet: &[char], max_len: usize, cap: usize) -> Result<Vec<String>, EmbeddingError> {
    if alphabet.is_empty() {
        return Err(EmbeddingError::EmptyAlphabet);
    }
    if max_len == 0 {
        return Err(EmbeddingError::EmptyCandidates);
    }
    let mut count: usize = 0;
    let mut layer: usize = 1;
    for _ in 0..max_len {
        layer = layer.saturating_mul(alphabet.len());
        count = count.saturating_add(layer);
    }
    if count > cap {
        return Err(EmbeddingError::CandidateCap { count, cap });
    }

    let mut out = Vec::with_capacity(count);
    let mut prev: Vec<String> = vec![String::new()];
    for _ in 0..max_len {
        let next: Vec<String> = prev
            .iter()
            .flat_map(|p| alphabet.iter().map(move |c| format!("{p}{c}")))
            .collect();
        out.extend(next.iter().cloned());
        prev = next;
    }
    Ok(out)
}

pub fn scan_balanced_tokens<S: VectorSource + ?Sized>(
    source: &S,
    target_a: &str,
    target_b: &str,
    options: &ScanOptions,
) -> Result<ScanReport, EmbeddingError> {
    let targets = source.resolve(&[target_a.to_string(), target_b.to_string()])?;
    let mut targets = targets.into_iter();
    let va = targets
        .next()
        .flatten()
        .ok_or_else(|| EmbeddingError::UnknownToken(target_a.to_string()))?;
    let vb = targets
        .next()
        .flatten()
        .ok_or_else(|| EmbeddingError::UnknownToken(target_b.to_string()))?;

    let candidates = enumerate_candidates(&options.alphabet, options.max_len, options.cap)?;
    let vectors = source.resolve(&candidates)?;

    let mut entries = Vec::new();
    for (candidate, vector) in candidates.into_iter().zip(vectors) {
        let Some(v) = vector else { continue };
        let delta = (cosine_similarity(&v, &va)? - cosine_similarity(&v, &vb)?).abs();
        entries.push(ScanEntry { candidate, delta });
    }
    if entries.is_empty() {
        return Err(EmbeddingError::EmptyCandidates);
    }
    entries.sort_by(|x, y| x.delta.total_cmp(&y.delta));

    let mut best_per_length: Vec<(usize, ScanEntry)> = Vec::new();
    for len in 1..=options.max_len {
        if let Some(e) = entries.iter().find(|e| e.candidate.chars().count() == len) {
            best_per_length.push((len, e.clone()));
        }
    }
    Ok(ScanReport {
        entries,
        best_per_length,
    })
}
