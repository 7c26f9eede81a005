use std::path::{Path, PathBuf};

use clap::Args;
use semwave_core::potential::double_well_eval;
use semwave_core::wave::snapshot::{read_real_component, read_snapshot, write_snapshot};
use semwave_core::wave::{charge_conservation_report, evolve, Evolver};
use semwave_core::{Complex64, DoubleWellParams, EvolutionConfig, Grid, SplitMix64, WaveField};
use serde::{Deserialize, Serialize};

use super::Overrides;
use crate::error::CliError;
use crate::output::Outputs;

#[derive(Debug, Args)]
pub struct Flags {
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    record_every: Option<u64>,
}

impl Flags {
    pub fn overrides(&self) -> Vec<(&'static str, serde_json::Value)> {
        Overrides::new()
            .opt("dt", &self.dt)
            .opt("steps", &self.steps)
            .opt("gamma", &self.gamma)
            .opt("record_every", &self.record_every)
            .done()
    }
}

fn one() -> usize {
    1
}

/// `dims` axes, each `[lo, hi)` with `n` points.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    #[serde(default = "one")]
    pub dims: usize,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid, CliError> {
        let grid = match self.dims {
            1 => Grid::line(self.lo, self.hi, self.n),
            2 => Grid::square(self.lo, self.hi, self.n),
            3 => Grid::cube(self.lo, self.hi, self.n),
            d => return Err(CliError::config("grid.dims", format!("must be 1, 2 or 3, got {d}"))),
        };
        grid.map_err(|e| CliError::config("grid", e.to_string()))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Initial {
    /// Unit-norm `exp(−|x−x₀|²/(4σ²) + i p·x)`.
    Gaussian {
        #[serde(default)]
        center: Option<Vec<f64>>,
        sigma: f64,
        #[serde(default)]
        momentum: Option<Vec<f64>>,
    },
    /// `A sech(η(x−x₀)) e^{ivx}` (1D); `A` defaults to `η/√−γ`.
    Sech {
        #[serde(default = "eta_one")]
        eta: f64,
        #[serde(default)]
        center: f64,
        #[serde(default)]
        velocity: f64,
        #[serde(default)]
        amplitude: Option<f64>,
    },
    Snapshot {
        path: PathBuf,
    },
}

fn eta_one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Potential {
    #[default]
    None,
    /// `½ω²|x − x₀|²`.
    Harmonic {
        omega: f64,
        #[serde(default)]
        center: Option<Vec<f64>>,
    },
    /// `c(x² − v²)²` (1D).
    DoubleWell(DoubleWellParams),
    /// A real-component snapshot on the same grid.
    File {
        path: PathBuf,
    },
}

/// Additive complex Gaussian noise from the run seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Noise {
    pub amplitude: f64,
}

fn default_tolerance() -> f64 {
    1e-8
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Required unless the initial state is a snapshot.
    #[serde(default)]
    pub grid: Option<GridSpec>,
    pub initial: Initial,
    #[serde(default)]
    pub potential: Potential,
    #[serde(default)]
    pub gamma: f64,
    pub dt: f64,
    pub steps: u64,
    #[serde(default = "record_one")]
    pub record_every: u64,
    #[serde(default)]
    pub occupancy_split: Option<f64>,
    #[serde(default)]
    pub noise: Option<Noise>,
    /// Also write `snapshots/step_<k>.bin` every this many steps.
    #[serde(default)]
    pub snapshot_every: Option<u64>,
    /// Relative norm drift allowed by the charge report.
    #[serde(default = "default_tolerance")]
    pub charge_tolerance: f64,
}

fn record_one() -> u64 {
    1
}

fn vector_or_zero(v: &Option<Vec<f64>>, dims: usize, name: &str) -> Result<Vec<f64>, CliError> {
    match v {
        None => Ok(vec![0.0; dims]),
        Some(v) if v.len() == dims => Ok(v.clone()),
        Some(v) => Err(CliError::config(name, format!("expected {dims} components, got {}", v.len()))),
    }
}

fn initial_field(p: &Params) -> Result<WaveField, CliError> {
    if let Initial::Snapshot { path } = &p.initial {
        if p.grid.is_some() {
            return Err(CliError::config("grid", "the grid comes from the initial snapshot; remove it"));
        }
        return Ok(read_snapshot(path)?.0);
    }
    let grid = p
        .grid
        .as_ref()
        .ok_or_else(|| CliError::config("grid", "missing"))?
        .build()?;
    let dims = grid.ndim();
    let field = match &p.initial {
        Initial::Gaussian { center, sigma, momentum } => {
            if !(sigma.is_finite() && *sigma > 0.0) {
                return Err(CliError::config("initial.sigma", "must be positive"));
            }
            let c = vector_or_zero(center, dims, "initial.center")?;
            let k = vector_or_zero(momentum, dims, "initial.momentum")?;
            let s2 = 4.0 * sigma * sigma;
            WaveField::from_fn(grid, |x| {
                let r2: f64 = x.iter().zip(&c).map(|(x, c)| (x - c) * (x - c)).sum();
                let phase: f64 = x.iter().zip(&k).map(|(x, k)| x * k).sum();
                Complex64::from_polar((-r2 / s2).exp(), phase)
            })?
            .normalized()?
        }
        Initial::Sech { eta, center, velocity, amplitude } => {
            if dims != 1 {
                return Err(CliError::config("initial.kind", "sech profiles are 1D"));
            }
            let amp = match amplitude {
                Some(a) => *a,
                None if p.gamma < 0.0 => eta / (-p.gamma).sqrt(),
                None => return Err(CliError::config("initial.amplitude", "required unless gamma < 0")),
            };
            WaveField::from_fn(grid, |x| {
                Complex64::from_polar(amp / (eta * (x[0] - center)).cosh(), velocity * x[0])
            })?
        }
        Initial::Snapshot { .. } => unreachable!(),
    };
    Ok(field)
}

fn potential_on(grid: &Grid, potential: &Potential) -> Result<Option<Vec<f64>>, CliError> {
    Ok(match potential {
        Potential::None => None,
        Potential::Harmonic { omega, center } => {
            let c = vector_or_zero(center, grid.ndim(), "potential.center")?;
            let w2 = omega * omega;
            Some(grid.sample(|x| 0.5 * w2 * x.iter().zip(&c).map(|(x, c)| (x - c) * (x - c)).sum::<f64>()))
        }
        Potential::DoubleWell(params) => {
            if grid.ndim() != 1 {
                return Err(CliError::config("potential.kind", "double_well is 1D"));
            }
            Some(grid.sample(|x| double_well_eval(params, x[0])))
        }
        Potential::File { path } => {
            let (g, v) = read_real_component(path)?;
            grid.check_same(&g)
                .map_err(|e| CliError::config("potential.path", format!("{}: {e}", path.display())))?;
            Some(v)
        }
    })
}

fn add_noise(field: &mut WaveField, noise: &Noise, seed: u64) -> Result<(), CliError> {
    if !(noise.amplitude.is_finite() && noise.amplitude >= 0.0) {
        return Err(CliError::config("noise.amplitude", "must be finite and >= 0"));
    }
    let mut rng = SplitMix64::new(seed);
    for z in field.samples_mut() {
        let re = rng.normal();
        let im = rng.normal();
        *z += noise.amplitude * Complex64::new(re, im);
    }
    Ok(())
}

fn write_trajectory(dir: &Path, field: &WaveField, p: &Params, potential: Option<Vec<f64>>, every: u64, out: &mut Outputs) -> Result<(), CliError> {
    let sub = dir.join("snapshots");
    std::fs::create_dir_all(&sub).map_err(CliError::io(&sub))?;
    let width = p.steps.to_string().len();
    let mut ev = Evolver::new(field.clone(), p.dt, p.gamma, potential)?;
    let save = |ev: &Evolver, out: &mut Outputs| -> Result<(), CliError> {
        let name = format!("snapshots/step_{:0width$}.bin", ev.steps_done());
        write_snapshot(&out.path(&name), &ev.field(), ev.time())?;
        out.record(&name);
        out.record(&name.replace(".bin", ".json"));
        Ok(())
    };
    save(&ev, out)?;
    let mut remaining = p.steps;
    while remaining > 0 {
        let chunk = remaining.min(every);
        ev.advance(chunk)?;
        remaining -= chunk;
        save(&ev, out)?;
    }
    Ok(())
}

pub fn run(p: &Params, seed: u64, out: &mut Outputs) -> Result<(), CliError> {
    let mut field = initial_field(p)?;
    if let Some(noise) = &p.noise {
        add_noise(&mut field, noise, seed)?;
    }
    let potential = potential_on(field.grid(), &p.potential)?;
    let config = EvolutionConfig {
        dt: p.dt,
        steps: p.steps,
        gamma: p.gamma,
        potential: potential.clone(),
        record_every: p.record_every,
        occupancy_split: p.occupancy_split,
    };
    let (last, series) = evolve(&field, &config)?;
    out.text("observables.csv", &series.to_csv())?;
    write_snapshot(&out.path("final.bin"), &last, p.dt * p.steps as f64)?;
    out.record("final.bin");
    out.record("final.json");
    let report = charge_conservation_report(&series, p.charge_tolerance)?;
    out.json("charge.json", &report)?;
    if let Some(every) = p.snapshot_every {
        if every == 0 {
            return Err(CliError::config("snapshot_every", "must be >= 1"));
        }
        let dir = out.dir().to_path_buf();
        write_trajectory(&dir, &field, p, potential, every, out)?;
    }
    Ok(())
}
