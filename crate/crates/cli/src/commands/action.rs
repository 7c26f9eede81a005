use std::path::{Path, PathBuf};

use clap::Args;
use semwave_core::gauge::{
    divergence_check, effective_action, lagrangian_terms, solve_scalar_potential, LagrangianInputs, Nonlinearity, Term,
    VectorPotentialField,
};
use semwave_core::wave::snapshot::{read_real_component, read_snapshot};
use semwave_core::{DerivativeScheme, GaugeError, GreensSign, GreensSpec, Grid, WaveField};
use serde::{Deserialize, Serialize};

use super::Overrides;
use crate::error::CliError;
use crate::output::Outputs;

#[derive(Debug, Args)]
pub struct Flags {
    /// Snapshot files; two or more form a trajectory.
    #[arg(long = "snapshot")]
    snapshots: Vec<PathBuf>,
    #[arg(long)]
    prev: Option<PathBuf>,
    #[arg(long)]
    dt: Option<f64>,
    /// Comma-separated term names to evaluate.
    #[arg(long, value_delimiter = ',')]
    terms: Vec<String>,
}

impl Flags {
    pub fn overrides(&self) -> Vec<(&'static str, serde_json::Value)> {
        let snaps: Vec<String> = self.snapshots.iter().map(|p| p.display().to_string()).collect();
        Overrides::new()
            .list("snapshots", &snaps)
            .path("prev", &self.prev)
            .opt("dt", &self.dt)
            .list("terms", &self.terms)
            .done()
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreensParams {
    pub dim: usize,
    #[serde(default)]
    pub sign: GreensSign,
}

impl GreensParams {
    fn spec(&self) -> Result<GreensSpec, CliError> {
        let s = GreensSpec::new(self.dim).map_err(|e| CliError::config("greens.dim", e.to_string()))?;
        Ok(if self.sign == GreensSign::Negated { s.negated() } else { s })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScalarPotential {
    /// Real-component snapshot.
    File { path: PathBuf },
    /// Solve `∇²A₀ = −ρ` from the snapshot density with the `greens` spec.
    Poisson,
}

fn default_div_tol() -> f64 {
    1e-6
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub snapshots: Vec<PathBuf>,
    /// Previous snapshot for the time derivative of a single snapshot.
    #[serde(default)]
    pub prev: Option<PathBuf>,
    /// Defaults to the difference of the two snapshot times.
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default)]
    pub a0: Option<ScalarPotential>,
    /// One real-component file per axis.
    #[serde(default)]
    pub a: Option<Vec<PathBuf>>,
    #[serde(default)]
    pub nonlinearity: Nonlinearity,
    #[serde(default)]
    pub greens: Option<GreensParams>,
    #[serde(default)]
    pub include_nonlocal: bool,
    #[serde(default)]
    pub scheme: DerivativeScheme,
    #[serde(default)]
    pub terms: Option<Vec<Term>>,
    #[serde(default = "default_div_tol")]
    pub divergence_tolerance: f64,
}

fn component(path: &Path, grid: &Grid, param: &str) -> Result<Vec<f64>, CliError> {
    let (g, v) = read_real_component(path)?;
    grid.check_same(&g)
        .map_err(|e| CliError::config(param, format!("{}: {e}", path.display())))?;
    Ok(v)
}

/// Asking for a term without its inputs is a configuration mistake.
fn missing_as_config(e: GaugeError) -> CliError {
    match e {
        GaugeError::MissingInput { .. } => CliError::config("terms", e.to_string()),
        other => other.into(),
    }
}

pub fn run(p: &Params, out: &mut Outputs) -> Result<(), CliError> {
    if p.snapshots.is_empty() {
        return Err(CliError::config("snapshots", "at least one snapshot is required"));
    }
    let trajectory: Vec<(f64, WaveField)> = p
        .snapshots
        .iter()
        .map(|path| read_snapshot(path).map(|(f, t)| (t, f)))
        .collect::<Result<_, _>>()?;
    let grid = trajectory[0].1.grid().clone();
    for (i, (_, f)) in trajectory.iter().enumerate() {
        grid.check_same(f.grid())
            .map_err(|e| CliError::config(format!("snapshots[{i}]"), e.to_string()))?;
    }

    let greens = p.greens.as_ref().map(GreensParams::spec).transpose()?;
    let a0 = match &p.a0 {
        None => None,
        Some(ScalarPotential::File { path }) => Some(component(path, &grid, "a0.path")?),
        Some(ScalarPotential::Poisson) => {
            let spec = greens.ok_or_else(|| CliError::config("greens", "required by a0 = poisson"))?;
            Some(solve_scalar_potential(&grid, &trajectory[0].1.density(), &spec)?)
        }
    };
    let a = match &p.a {
        None => None,
        Some(paths) => {
            let comps = paths
                .iter()
                .enumerate()
                .map(|(i, path)| component(path, &grid, &format!("a[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Some(VectorPotentialField::new(grid.clone(), comps)?)
        }
    };

    let prev = p.prev.as_deref().map(read_snapshot).transpose()?;
    let dt = match (p.dt, &prev) {
        (Some(dt), _) => dt,
        (None, Some((_, t_prev))) => trajectory[0].0 - t_prev,
        (None, None) => 0.0,
    };
    let inputs = LagrangianInputs {
        prev: prev.as_ref().map(|(f, _)| f),
        dt,
        a0: a0.as_deref(),
        a: a.as_ref(),
        nonlinearity: p.nonlinearity,
        greens,
        include_nonlocal: p.include_nonlocal,
        scheme: p.scheme,
        requested: p.terms.clone(),
    };

    if trajectory.len() == 1 {
        let b = lagrangian_terms(&trajectory[0].1, &inputs).map_err(missing_as_config)?;
        println!("{}", b.total());
        out.json("action.json", &b)?;
    } else {
        if p.prev.is_some() || p.dt.is_some() {
            return Err(CliError::config("prev", "a trajectory takes its time steps from the snapshots"));
        }
        let s = effective_action(&trajectory, &inputs).map_err(missing_as_config)?;
        println!("{}", s.action);
        out.json("action.json", &s.breakdown)?;
        out.json("lagrangians.json", &s.lagrangians)?;
    }
    if let Some(a) = &a {
        out.json("divergence.json", &divergence_check(a, p.divergence_tolerance, p.scheme))?;
    }
    Ok(())
}
