use std::fs;
use std::path::PathBuf;

use clap::Args;
use semwave_core::embedding::{cosine_similarity, EmbeddingFormat};
use semwave_core::state::complex_similarity;
use semwave_core::SemanticState;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{load_set, Overrides};
use crate::error::CliError;
use crate::output::Outputs;

#[derive(Debug, Args)]
pub struct Flags {
    #[arg(long)]
    embeddings: Option<PathBuf>,
    /// jsonl, csv or binary; inferred from the extension when omitted.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    /// State JSON (as written by `complexify`).
    #[arg(long)]
    state_a: Option<PathBuf>,
    #[arg(long)]
    state_b: Option<PathBuf>,
}

impl Flags {
    pub fn overrides(&self) -> Vec<(&'static str, serde_json::Value)> {
        Overrides::new()
            .path("embeddings", &self.embeddings)
            .opt("format", &self.format)
            .opt("a", &self.a)
            .opt("b", &self.b)
            .path("state_a", &self.state_a)
            .path("state_b", &self.state_b)
            .done()
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default)]
    pub embeddings: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<EmbeddingFormat>,
    #[serde(default)]
    pub a: Option<String>,
    #[serde(default)]
    pub b: Option<String>,
    #[serde(default)]
    pub state_a: Option<PathBuf>,
    #[serde(default)]
    pub state_b: Option<PathBuf>,
}

fn read_state(path: &PathBuf, param: &str) -> Result<SemanticState, CliError> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    serde_json::from_str(&text).map_err(|e| CliError::config(param, format!("{}: {e}", path.display())))
}

pub fn run(p: &Params, out: &mut Outputs) -> Result<(), CliError> {
    match (&p.a, &p.b, &p.state_a, &p.state_b) {
        (Some(a), Some(b), None, None) => {
            let path = p
                .embeddings
                .as_ref()
                .ok_or_else(|| CliError::config("embeddings", "required for token similarity"))?;
            let set = load_set(path, p.format)?;
            let s = cosine_similarity(set.require(a)?, set.require(b)?)?;
            println!("{s}");
            out.json("similarity.json", &json!({"kind": "cosine", "a": a, "b": b, "similarity": s}))?;
        }
        (None, None, Some(sa), Some(sb)) => {
            let s = complex_similarity(&read_state(sa, "state_a")?, &read_state(sb, "state_b")?)?;
            let z = s.to_complex();
            println!("{} {}", s.magnitude(), s.phase());
            out.json(
                "similarity.json",
                &json!({
                    "kind": "complex",
                    "re": z.re,
                    "im": z.im,
                    "magnitude": s.magnitude(),
                    "phase": s.phase(),
                }),
            )?;
        }
        _ => {
            return Err(CliError::config(
                "a",
                "give either `a` and `b` (with embeddings) or `state_a` and `state_b`",
            ))
        }
    }
    Ok(())
}
