use clap::Args;
use semwave_core::gauge::greens_function;
use semwave_core::{GreensSign, GreensSpec};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::Overrides;
use crate::error::CliError;
use crate::output::{csv_table, num, Outputs};

#[derive(Debug, Args)]
pub struct Flags {
    /// Space dimension.
    #[arg(long)]
    dim: Option<usize>,
    /// standard or negated.
    #[arg(long)]
    sign: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
}

impl Flags {
    pub fn overrides(&self) -> Vec<(&'static str, serde_json::Value)> {
        Overrides::new()
            .opt("dim", &self.dim)
            .opt("sign", &self.sign)
            .opt("format", &self.format)
            .done()
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    #[default]
    Csv,
    Json,
}

fn r_min() -> f64 {
    0.1
}
fn r_max() -> f64 {
    5.0
}
fn samples() -> usize {
    50
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub dim: usize,
    #[serde(default)]
    pub sign: GreensSign,
    #[serde(default = "r_min")]
    pub r_min: f64,
    #[serde(default = "r_max")]
    pub r_max: f64,
    #[serde(default = "samples")]
    pub samples: usize,
    #[serde(default)]
    pub format: TableFormat,
}

pub fn run(p: &Params, out: &mut Outputs) -> Result<(), CliError> {
    if p.samples < 2 {
        return Err(CliError::config("samples", "must be >= 2"));
    }
    if !(p.r_min > 0.0 && p.r_min < p.r_max && p.r_max.is_finite()) {
        return Err(CliError::config("r_min", "need 0 < r_min < r_max"));
    }
    let mut spec = GreensSpec::new(p.dim).map_err(|e| CliError::config("dim", e.to_string()))?;
    if p.sign == GreensSign::Negated {
        spec = spec.negated();
    }
    let last = (p.samples - 1) as f64;
    let table = (0..p.samples)
        .map(|i| {
            let r = p.r_min + (p.r_max - p.r_min) * i as f64 / last;
            Ok((r, greens_function(&spec, r)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    match p.format {
        TableFormat::Csv => {
            out.text("greens.csv", &csv_table(&["r", "G"], table.iter().map(|(r, g)| vec![num(*r), num(*g)])))?;
        }
        TableFormat::Json => {
            let rows: Vec<_> = table.iter().map(|(r, g)| json!({"r": r, "G": g})).collect();
            out.json("greens.json", &json!({"dim": p.dim, "sign": p.sign, "values": rows}))?;
        }
    }
    Ok(())
}
