use std::path::PathBuf;

use clap::Args;
use semwave_core::embedding::{
    enumerate_candidates, fetch_embeddings, scan_balanced_tokens, EmbeddingFormat, ProviderConfig, ScanOptions,
    DEFAULT_CANDIDATE_CAP,
};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{load_set, Overrides};
use crate::error::CliError;
use crate::output::{csv_table, num, Outputs};

#[derive(Debug, Args)]
pub struct Flags {
    #[arg(long)]
    embeddings: Option<PathBuf>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    alphabet: Option<String>,
    #[arg(long)]
    max_len: Option<usize>,
}

impl Flags {
    pub fn overrides(&self) -> Vec<(&'static str, serde_json::Value)> {
        Overrides::new()
            .path("embeddings", &self.embeddings)
            .opt("a", &self.a)
            .opt("b", &self.b)
            .opt("alphabet", &self.alphabet)
            .opt("max_len", &self.max_len)
            .done()
    }
}

fn cap() -> usize {
    DEFAULT_CANDIDATE_CAP
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Local embeddings; alternatively `provider`.
    #[serde(default)]
    pub embeddings: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<EmbeddingFormat>,
    #[serde(default)]
    pub provider: Option<ProviderConfig>,
    pub a: String,
    pub b: String,
    pub alphabet: String,
    pub max_len: usize,
    #[serde(default = "cap")]
    pub cap: usize,
}

pub fn run(p: &Params, out: &mut Outputs) -> Result<(), CliError> {
    let options = ScanOptions {
        alphabet: p.alphabet.chars().collect(),
        max_len: p.max_len,
        cap: p.cap,
    };
    let set = match (&p.embeddings, &p.provider) {
        (Some(path), None) => load_set(path, p.format)?,
        (None, Some(provider)) => {
            let mut tokens = vec![p.a.clone(), p.b.clone()];
            tokens.extend(enumerate_candidates(&options.alphabet, options.max_len, options.cap)?);
            fetch_embeddings(provider, &tokens)?
        }
        _ => return Err(CliError::config("embeddings", "give exactly one of `embeddings` or `provider`")),
    };
    let report = scan_balanced_tokens(&set, &p.a, &p.b, &options)?;
    let rows = report
        .entries
        .iter()
        .map(|e| vec![e.candidate.clone(), e.candidate.chars().count().to_string(), num(e.delta)]);
    out.text("scan.csv", &csv_table(&["candidate", "length", "delta"], rows))?;
    let best: Vec<_> = report
        .best_per_length
        .iter()
        .map(|(len, e)| json!({"length": len, "candidate": e.candidate, "delta": e.delta}))
        .collect();
    for (len, e) in &report.best_per_length {
        println!("{len}\t{}\t{}", e.candidate, e.delta);
    }
    out.json("scan_best.json", &json!({"a": p.a, "b": p.b, "best_per_length": best}))?;
    Ok(())
}
