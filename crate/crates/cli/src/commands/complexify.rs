use std::path::PathBuf;

use clap::Args;
use semwave_core::embedding::EmbeddingFormat;
use semwave_core::state::{complexify, measure_probabilities, MagnitudeRule};
use serde::{Deserialize, Serialize};

use super::{load_set, Overrides};
use crate::error::CliError;
use crate::output::{csv_table, num, Outputs};

#[derive(Debug, Args)]
pub struct Flags {
    #[arg(long)]
    embeddings: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    target: Option<String>,
    /// Basis tokens, in order.
    #[arg(long, value_delimiter = ',')]
    basis: Vec<String>,
    #[arg(long)]
    beta: Option<f64>,
    /// Softmax temperature (selects the softmax magnitude rule).
    #[arg(long)]
    tau: Option<f64>,
}

impl Flags {
    pub fn overrides(&self) -> Vec<(&'static str, serde_json::Value)> {
        Overrides::new()
            .path("embeddings", &self.embeddings)
            .opt("format", &self.format)
            .opt("target", &self.target)
            .list("basis", &self.basis)
            .opt("beta", &self.beta)
            .opt("magnitude.tau", &self.tau)
            .opt("magnitude.rule", &self.tau.map(|_| "softmax"))
            .done()
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub embeddings: PathBuf,
    #[serde(default)]
    pub format: Option<EmbeddingFormat>,
    pub target: String,
    pub basis: Vec<String>,
    #[serde(default = "one")]
    pub beta: f64,
    #[serde(default)]
    pub magnitude: MagnitudeRule,
}

pub fn run(p: &Params, out: &mut Outputs) -> Result<(), CliError> {
    if !p.beta.is_finite() {
        return Err(CliError::config("beta", "must be finite"));
    }
    let set = load_set(&p.embeddings, p.format)?;
    let state = complexify(&p.target, &p.basis, &set, p.beta, p.magnitude)?;
    out.json("state.json", &state)?;
    let rows = state
        .basis()
        .iter()
        .zip(state.coeffs())
        .zip(measure_probabilities(&state)?)
        .map(|((token, c), (_, prob))| vec![token.clone(), num(c.magnitude()), num(c.phase()), num(prob)]);
    let csv = csv_table(&["token", "magnitude", "phase", "probability"], rows);
    print!("{csv}");
    out.text("state.csv", &csv)?;
    Ok(())
}
