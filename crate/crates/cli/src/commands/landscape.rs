use clap::Args;
use semwave_core::potential::{break_symmetry, sample_grid, PotentialKind, VacuumDiagnostics};
use serde::{Deserialize, Serialize};

use super::Overrides;
use crate::error::CliError;
use crate::output::Outputs;

#[derive(Debug, Args)]
pub struct Flags {
    #[arg(long)]
    lo: Option<f64>,
    #[arg(long)]
    hi: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
}

impl Flags {
    pub fn overrides(&self) -> Vec<(&'static str, serde_json::Value)> {
        Overrides::new().opt("lo", &self.lo).opt("hi", &self.hi).opt("n", &self.n).done()
    }
}

fn lo() -> f64 {
    -3.0
}
fn hi() -> f64 {
    3.0
}
fn n() -> usize {
    601
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub potential: PotentialKind,
    #[serde(default = "lo")]
    pub lo: f64,
    #[serde(default = "hi")]
    pub hi: f64,
    #[serde(default = "n")]
    pub n: usize,
}

pub fn run(p: &Params, seed: u64, out: &mut Outputs) -> Result<(), CliError> {
    let samples = sample_grid(&p.potential, p.lo, p.hi, p.n)?;
    out.text("potential.csv", &samples.to_csv())?;
    if let PotentialKind::MexicanHat(params) = &p.potential {
        let vacuum = break_symmetry(params, seed);
        out.json("vacuum.json", &VacuumDiagnostics::new(params, &vacuum))?;
    }
    Ok(())
}
