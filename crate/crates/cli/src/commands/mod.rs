use std::path::{Path, PathBuf};

use semwave_core::embedding::{load_embeddings, EmbeddingFormat, EmbeddingSet};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::config;
use crate::error::CliError;
use crate::output::Outputs;

pub mod action;
pub mod complexify;
pub mod evolve;
pub mod fetch;
pub mod greens;
pub mod interfere;
pub mod landscape;
pub mod scan;
pub mod similarity;
pub mod tunnel;

pub const NAMES: [&str; 10] = [
    "similarity",
    "complexify",
    "interfere",
    "evolve",
    "tunnel",
    "greens",
    "action",
    "landscape",
    "scan",
    "fetch",
];

fn go<P, F>(params: &Value, f: F) -> Result<Value, CliError>
where
    P: DeserializeOwned + Serialize,
    F: FnOnce(&P) -> Result<(), CliError>,
{
    let p: P = config::extract(params)?;
    f(&p)?;
    Ok(serde_json::to_value(&p).expect("params serialize"))
}

/// Runs `command` and returns its fully resolved parameters for the manifest.
pub fn dispatch(command: &str, params: &Value, seed: u64, out: &mut Outputs) -> Result<Value, CliError> {
    match command {
        "similarity" => go(params, |p| similarity::run(p, out)),
        "complexify" => go(params, |p| complexify::run(p, out)),
        "interfere" => go(params, |p| interfere::run(p, out)),
        "evolve" => go(params, |p| evolve::run(p, seed, out)),
        "tunnel" => go(params, |p| tunnel::run(p, out)),
        "greens" => go(params, |p| greens::run(p, out)),
        "action" => go(params, |p| action::run(p, out)),
        "landscape" => go(params, |p| landscape::run(p, seed, out)),
        "scan" => go(params, |p| scan::run(p, out)),
        "fetch" => go(params, |p| fetch::run(p, out)),
        other => Err(CliError::Usage(format!("unknown subcommand `{other}`"))),
    }
}

/// Embedding file plus an optional explicit format.
pub(crate) fn load_set(path: &Path, format: Option<EmbeddingFormat>) -> Result<EmbeddingSet, CliError> {
    let format = match format.or_else(|| EmbeddingFormat::from_path(path)) {
        Some(f) => f,
        None => {
            return Err(CliError::config(
                "format",
                format!("cannot infer the format of {}; set jsonl, csv or binary", path.display()),
            ))
        }
    };
    Ok(load_embeddings(path, format)?)
}

/// Flag helpers: only flags actually given become overrides.
pub(crate) struct Overrides(Vec<(&'static str, Value)>);

impl Overrides {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn opt<T: Serialize>(mut self, key: &'static str, v: &Option<T>) -> Self {
        if let Some(v) = v {
            self.0.push((key, serde_json::to_value(v).expect("flag serializes")));
        }
        self
    }

    pub fn path(self, key: &'static str, v: &Option<PathBuf>) -> Self {
        self.opt(key, &v.as_ref().map(|p| p.display().to_string()))
    }

    pub fn list<T: Serialize>(self, key: &'static str, v: &[T]) -> Self {
        if v.is_empty() {
            self
        } else {
            let v = Some(v);
            self.opt(key, &v)
        }
    }

    pub fn flag(self, key: &'static str, on: bool) -> Self {
        self.opt(key, &on.then_some(true))
    }

    pub fn done(self) -> Vec<(&'static str, Value)> {
        self.0
    }
}
