use std::fs;
use std::path::PathBuf;

use clap::Args;
use semwave_core::embedding::{fetch_embeddings, save_embeddings, EmbeddingFormat, ProviderConfig};
use serde::{Deserialize, Serialize};

use super::Overrides;
use crate::error::CliError;
use crate::output::Outputs;

#[derive(Debug, Args)]
pub struct Flags {
    /// Comma-separated tokens.
    #[arg(long, value_delimiter = ',')]
    tokens: Vec<String>,
    /// File with one token per line.
    #[arg(long)]
    tokens_file: Option<PathBuf>,
}

impl Flags {
    pub fn overrides(&self) -> Vec<(&'static str, serde_json::Value)> {
        Overrides::new()
            .list("tokens", &self.tokens)
            .path("tokens_file", &self.tokens_file)
            .done()
    }
}

fn jsonl() -> EmbeddingFormat {
    EmbeddingFormat::Jsonl
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub provider: ProviderConfig,
    #[serde(default)]
    pub tokens: Vec<String>,
    #[serde(default)]
    pub tokens_file: Option<PathBuf>,
    #[serde(default = "jsonl")]
    pub format: EmbeddingFormat,
}

pub fn run(p: &Params, out: &mut Outputs) -> Result<(), CliError> {
    let mut tokens = p.tokens.clone();
    if let Some(path) = &p.tokens_file {
        let text = fs::read_to_string(path).map_err(CliError::io(path))?;
        tokens.extend(text.lines().filter(|l| !l.is_empty()).map(str::to_string));
    }
    if tokens.is_empty() {
        return Err(CliError::config("tokens", "no tokens given"));
    }
    let set = fetch_embeddings(&p.provider, &tokens)?;
    let name = match p.format {
        EmbeddingFormat::Jsonl => "embeddings.jsonl",
        EmbeddingFormat::Csv => "embeddings.csv",
        EmbeddingFormat::Binary => "embeddings.bin",
    };
    save_embeddings(&set, &out.path(name), p.format)?;
    out.record(name);
    println!("{} tokens, dim {}", set.len(), set.dim());
    Ok(())
}
