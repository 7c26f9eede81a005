use clap::Args;
use semwave_core::wave::{spectral_tunneling_period, tunneling_period, TunnelingConfig, TunnelingStart};
use semwave_core::{DoubleWellParams, PotentialError};
use serde::{Deserialize, Serialize};

use super::Overrides;
use crate::error::CliError;
use crate::output::Outputs;

#[derive(Debug, Args)]
pub struct Flags {
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    v: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    /// Skip the time-domain run.
    #[arg(long)]
    spectral_only: bool,
}

impl Flags {
    pub fn overrides(&self) -> Vec<(&'static str, serde_json::Value)> {
        Overrides::new()
            .opt("c", &self.c)
            .opt("v", &self.v)
            .opt("n", &self.n)
            .opt("dt", &self.dt)
            .flag("spectral_only", self.spectral_only)
            .done()
    }
}

fn lo() -> f64 {
    -6.0
}
fn hi() -> f64 {
    6.0
}
fn n() -> usize {
    512
}
fn dt() -> f64 {
    1e-3
}
fn sample_every() -> u64 {
    10
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub c: f64,
    pub v: f64,
    #[serde(default = "lo")]
    pub lo: f64,
    #[serde(default = "hi")]
    pub hi: f64,
    #[serde(default = "n")]
    pub n: usize,
    #[serde(default = "dt")]
    pub dt: f64,
    #[serde(default)]
    pub start: TunnelingStart,
    #[serde(default)]
    pub max_time: Option<f64>,
    #[serde(default = "sample_every")]
    pub sample_every: u64,
    #[serde(default)]
    pub spectral_only: bool,
}

pub fn run(p: &Params, out: &mut Outputs) -> Result<(), CliError> {
    let well = DoubleWellParams::new(p.c, p.v).map_err(|e| match e {
        PotentialError::NonPositive { name, .. } => CliError::config(name, e.to_string()),
        other => other.into(),
    })?;
    let config = TunnelingConfig {
        params: well,
        lo: p.lo,
        hi: p.hi,
        n: p.n,
        dt: p.dt,
        start: p.start,
        max_time: p.max_time,
        sample_every: p.sample_every,
    };
    if p.spectral_only {
        let s = spectral_tunneling_period(&well, &config.grid()?)?;
        println!("{}", s.period);
        out.json("tunneling.json", &serde_json::json!({ "spectral": s }))?;
    } else {
        let r = tunneling_period(&config)?;
        println!("{} {}", r.t_measured, r.t_spectral);
        out.json("tunneling.json", &r)?;
    }
    Ok(())
}
