//! Term-by-term Lagrangian `L = ∫ 𝓛 dV` on a grid and its trapezoidal
//! time integral along a trajectory.
//!
//! Terms (each integrated over the grid):
//!
//! | term                  | density                                   |
//! |-----------------------|-------------------------------------------|
//! | `time_kinetic`        | `(i/2)(ψ*∂₀ψ − ψ∂₀ψ*) = −Im(ψ*∂₀ψ)`       |
//! | `gradient`            | `−½ Σ_i |∂_iψ|²`                          |
//! | `scalar_coupling`     | `A₀|ψ|²`                                  |
//! | `density_interaction` | `−½ A_iA_i |ψ|²`                          |
//! | `current_interaction` | `−(i/2) A_i J_i = A_i Im(ψ*∂_iψ)`         |
//! | `field_strength`      | `−¼ F_ijF_ij`, spatial components only    |
//! | `nonlinear`           | `−(γ/2)|ψ|⁴` or `μ²|ψ|² − 2λ|ψ|⁴`         |
//! | `coulomb_nonlocal`    | see [`super::coulomb_interaction`]        |
//!
//! `gradient + current_interaction + density_interaction` is `−½|Dψ|²`
//! with `D = ∂ − iA`, and `time_kinetic + scalar_coupling` is the matching
//! `D₀ = ∂₀ − iA₀` pairing, so the sum of those five is gauge invariant.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{coulomb_interaction, semantic_current, GaugeError, GreensSpec, VectorPotentialField};
use crate::grid::{derivative, derivative_real, DerivativeScheme, WaveField};
use crate::potential::MexicanHatParams;
use crate::sum::pairwise_sum;

const TOTAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    TimeKinetic,
    Gradient,
    ScalarCoupling,
    CurrentInteraction,
    DensityInteraction,
    FieldStrength,
    Nonlinear,
    CoulombNonlocal,
}

impl Term {
    pub const ALL: [Term; 8] = [
        Term::TimeKinetic,
        Term::Gradient,
        Term::ScalarCoupling,
        Term::CurrentInteraction,
        Term::DensityInteraction,
        Term::FieldStrength,
        Term::Nonlinear,
        Term::CoulombNonlocal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Term::TimeKinetic => "time_kinetic",
            Term::Gradient => "gradient",
            Term::ScalarCoupling => "scalar_coupling",
            Term::CurrentInteraction => "current_interaction",
            Term::DensityInteraction => "density_interaction",
            Term::FieldStrength => "field_strength",
            Term::Nonlinear => "nonlinear",
            Term::CoulombNonlocal => "coulomb_nonlocal",
        }
    }
}

impl std::str::FromStr for Term {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Term::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown term `{s}`"))
    }
}

/// Named term values and their sum. Absent terms are simply not listed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionBreakdown {
    terms: BTreeMap<Term, f64>,
    total: f64,
}

#[derive(Deserialize)]
struct BreakdownWire {
    terms: BTreeMap<Term, f64>,
    total: f64,
}

impl<'de> Deserialize<'de> for ActionBreakdown {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = BreakdownWire::deserialize(d)?;
        let b = Self::from_terms(w.terms);
        if (b.total - w.total).abs() > TOTAL_TOL * b.total.abs().max(1.0) {
            return Err(serde::de::Error::custom(format!(
                "total {} does not match the sum of terms {}",
                w.total, b.total
            )));
        }
        Ok(b)
    }
}

impl ActionBreakdown {
    pub fn from_terms(terms: BTreeMap<Term, f64>) -> Self {
        let total = terms.values().sum();
        Self { terms, total }
    }

    pub fn get(&self, term: Term) -> Option<f64> {
        self.terms.get(&term).copied()
    }

    pub fn terms(&self) -> &BTreeMap<Term, f64> {
        &self.terms
    }

    pub fn total(&self) -> f64 {
        self.total
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Nonlinearity {
    #[default]
    None,
    Cubic {
        gamma: f64,
    },
    MexicanHat(MexicanHatParams),
}

/// Everything besides `ψ` that the terms may depend on.
#[derive(Debug, Clone, Default)]
pub struct LagrangianInputs<'a> {
    /// Previous snapshot for the backward difference `∂₀ψ ≈ (ψ − ψ_prev)/dt`.
    pub prev: Option<&'a WaveField>,
    pub dt: f64,
    pub a0: Option<&'a [f64]>,
    pub a: Option<&'a VectorPotentialField>,
    pub nonlinearity: Nonlinearity,
    pub greens: Option<GreensSpec>,
    pub include_nonlocal: bool,
    pub scheme: DerivativeScheme,
    /// Restrict to these terms; requesting a term whose input is missing is
    /// an error. `None` evaluates every term whose inputs are present.
    pub requested: Option<Vec<Term>>,
}

fn integrate(values: &[f64], dv: f64) -> f64 {
    pairwise_sum(values) * dv
}

fn wants(inputs: &LagrangianInputs, term: Term, available: bool, missing: &'static str) -> Result<bool, GaugeError> {
    match &inputs.requested {
        None => Ok(available),
        Some(list) if list.contains(&term) => {
            if available {
                Ok(true)
            } else {
                Err(GaugeError::MissingInput {
                    term: term.name(),
                    missing,
                })
            }
        }
        Some(_) => Ok(false),
    }
}

pub fn lagrangian_terms(field: &WaveField, inputs: &LagrangianInputs) -> Result<ActionBreakdown, GaugeError> {
    let grid = field.grid();
    let psi = field.samples();
    let dv = grid.cell_volume();
    let rho = field.density();
    let mut terms = BTreeMap::new();

    if let Some(prev) = inputs.prev {
        grid.check_same(prev.grid())?;
    }
    if let Some(a0) = inputs.a0 {
        if a0.len() != grid.len() {
            return Err(GaugeError::Length {
                what: "A0",
                expected: grid.len(),
                actual: a0.len(),
            });
        }
    }
    if let Some(a) = inputs.a {
        grid.check_same(a.grid())?;
    }

    if wants(inputs, Term::TimeKinetic, inputs.prev.is_some(), "a previous snapshot")? {
        let prev = inputs.prev.expect("checked");
        if !(inputs.dt.is_finite() && inputs.dt != 0.0) {
            return Err(GaugeError::BadTimeStep(inputs.dt));
        }
        let vals: Vec<f64> = psi
            .iter()
            .zip(prev.samples())
            .map(|(now, before)| -(now.conj() * (now - before)).im / inputs.dt)
            .collect();
        terms.insert(Term::TimeKinetic, integrate(&vals, dv));
    }

    let grads: Vec<Vec<Complex64>> = (0..grid.ndim()).map(|ax| derivative(grid, psi, ax, inputs.scheme)).collect();

    if wants(inputs, Term::Gradient, true, "")? {
        let vals: Vec<f64> = (0..grid.len())
            .map(|j| -0.5 * grads.iter().map(|g| g[j].norm_sqr()).sum::<f64>())
            .collect();
        terms.insert(Term::Gradient, integrate(&vals, dv));
    }

    if wants(inputs, Term::ScalarCoupling, inputs.a0.is_some(), "A0")? {
        let a0 = inputs.a0.expect("checked");
        let vals: Vec<f64> = a0.iter().zip(&rho).map(|(a, r)| a * r).collect();
        terms.insert(Term::ScalarCoupling, integrate(&vals, dv));
    }

    let has_a = inputs.a.is_some();
    if wants(inputs, Term::CurrentInteraction, has_a, "A")? {
        let a = inputs.a.expect("checked");
        let j = semantic_current(field, inputs.scheme);
        // −(i/2) A_i (i Im J_i) = ½ A_i Im J_i
        let vals: Vec<f64> = (0..grid.len())
            .map(|c| {
                0.5 * a
                    .components()
                    .iter()
                    .zip(&j.components)
                    .map(|(ai, ji)| ai[c] * ji[c])
                    .sum::<f64>()
            })
            .collect();
        terms.insert(Term::CurrentInteraction, integrate(&vals, dv));
    }

    if wants(inputs, Term::DensityInteraction, has_a, "A")? {
        let a2 = inputs.a.expect("checked").squared();
        let vals: Vec<f64> = a2.iter().zip(&rho).map(|(a, r)| -0.5 * a * r).collect();
        terms.insert(Term::DensityInteraction, integrate(&vals, dv));
    }

    if wants(inputs, Term::FieldStrength, has_a, "A")? {
        let a = inputs.a.expect("checked");
        let d = grid.ndim();
        // dA[i][j] = ∂_j A_i
        let da: Vec<Vec<Vec<f64>>> = a
            .components()
            .iter()
            .map(|c| (0..d).map(|ax| derivative_real(grid, c, ax, inputs.scheme)).collect())
            .collect();
        let vals: Vec<f64> = (0..grid.len())
            .map(|c| {
                let mut s = 0.0;
                for i in 0..d {
                    for j in 0..d {
                        let f = da[j][i][c] - da[i][j][c];
                        s += f * f;
                    }
                }
                -0.25 * s
            })
            .collect();
        terms.insert(Term::FieldStrength, integrate(&vals, dv));
    }

    let has_nl = !matches!(inputs.nonlinearity, Nonlinearity::None);
    if wants(inputs, Term::Nonlinear, has_nl, "a nonlinearity")? {
        let vals: Vec<f64> = match inputs.nonlinearity {
            Nonlinearity::Cubic { gamma } => rho.iter().map(|r| -0.5 * gamma * r * r).collect(),
            Nonlinearity::MexicanHat(p) => rho.iter().map(|r| p.mu2() * r - 2.0 * p.lambda() * r * r).collect(),
            Nonlinearity::None => unreachable!(),
        };
        terms.insert(Term::Nonlinear, integrate(&vals, dv));
    }

    let has_nonlocal = inputs.include_nonlocal && inputs.greens.is_some();
    if inputs.include_nonlocal && inputs.greens.is_none() {
        return Err(GaugeError::MissingInput {
            term: Term::CoulombNonlocal.name(),
            missing: "a Green's function spec",
        });
    }
    if wants(inputs, Term::CoulombNonlocal, has_nonlocal, "a Green's function spec")? {
        let spec = inputs.greens.expect("checked");
        terms.insert(Term::CoulombNonlocal, coulomb_interaction(field, &spec)?);
    }

    let b = ActionBreakdown::from_terms(terms);
    debug_assert!((b.total - b.terms.values().sum::<f64>()).abs() <= TOTAL_TOL * b.total.abs().max(1.0));
    Ok(b)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveAction {
    /// Per-term time integrals; `total` is the action.
    pub breakdown: ActionBreakdown,
    /// Per-snapshot Lagrangians, in trajectory order.
    pub lagrangians: Vec<ActionBreakdown>,
    pub dt: f64,
    pub action: f64,
}

/// Trapezoidal time integral of the per-snapshot Lagrangians.
///
/// Snapshot `i ≥ 1` takes its time derivative backward from `i − 1`;
/// snapshot 0 uses the one-sided difference toward snapshot 1. `inputs.prev`
/// and `inputs.dt` are ignored.
pub fn effective_action(trajectory: &[(f64, WaveField)], inputs: &LagrangianInputs) -> Result<EffectiveAction, GaugeError> {
    if trajectory.len() < 2 {
        return Err(GaugeError::TooFewSnapshots(trajectory.len()));
    }
    let dt = trajectory[1].0 - trajectory[0].0;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(GaugeError::BadTimeStep(dt));
    }
    for (index, w) in trajectory.windows(2).enumerate() {
        let step = w[1].0 - w[0].0;
        if (step - dt).abs() > 1e-9 * dt {
            return Err(GaugeError::NonUniformSpacing { index });
        }
    }
    let lagrangians = trajectory
        .iter()
        .enumerate()
        .map(|(i, (_, field))| {
            let (prev, step) = if i == 0 { (&trajectory[1].1, -dt) } else { (&trajectory[i - 1].1, dt) };
            let mut local = inputs.clone();
            local.prev = Some(prev);
            local.dt = step;
            lagrangian_terms(field, &local)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let last = lagrangians.len() - 1;
    let weight = |i: usize| if i == 0 || i == last { 0.5 * dt } else { dt };
    let mut acc: BTreeMap<Term, f64> = BTreeMap::new();
    for (i, l) in lagrangians.iter().enumerate() {
        for (t, v) in l.terms() {
            *acc.entry(*t).or_insert(0.0) += weight(i) * v;
        }
    }
    let action = lagrangians.iter().enumerate().map(|(i, l)| weight(i) * l.total()).sum();
    Ok(EffectiveAction {
        breakdown: ActionBreakdown::from_terms(acc),
        lagrangians,
        dt,
        action,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    fn plane(k: f64, omega: f64, t: f64) -> WaveField {
        let l = std::f64::consts::TAU;
        WaveField::from_fn(Grid::line(0.0, l, 64).unwrap(), |x| Complex64::from_polar(1.0, k * x[0] - omega * t)).unwrap()
    }

    #[test]
    fn plane_wave_terms() {
        let (k, omega, dt) = (2.0, 2.0, 1e-3);
        let (prev, now) = (plane(k, omega, 0.0), plane(k, omega, dt));
        let norm = now.norm();
        let b = lagrangian_terms(
            &now,
            &LagrangianInputs {
                prev: Some(&prev),
                dt,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(b.terms().len(), 2);
        assert!((b.get(Term::Gradient).unwrap() + 0.5 * k * k * norm).abs() < 1e-2 * norm);
        assert!((b.get(Term::TimeKinetic).unwrap() - omega * norm).abs() < 1e-2 * omega * norm);
    }

    #[test]
    fn zero_vector_potential_terms_vanish() {
        let f = plane(1.0, 0.0, 0.0);
        let a = VectorPotentialField::zeros(f.grid().clone());
        let b = lagrangian_terms(
            &f,
            &LagrangianInputs {
                a: Some(&a),
                ..Default::default()
            },
        )
        .unwrap();
        for t in [Term::CurrentInteraction, Term::DensityInteraction, Term::FieldStrength] {
            assert_eq!(b.get(t), Some(0.0));
        }
    }

    #[test]
    fn requesting_missing_input_fails() {
        let f = plane(1.0, 0.0, 0.0);
        let err = lagrangian_terms(
            &f,
            &LagrangianInputs {
                requested: Some(vec![Term::FieldStrength]),
                ..Default::default()
            },
        );
        assert!(matches!(err, Err(GaugeError::MissingInput { term: "field_strength", .. })));
    }

    #[test]
    fn breakdown_json_shape() {
        let mut m = BTreeMap::new();
        m.insert(Term::Gradient, -1.5);
        m.insert(Term::TimeKinetic, 0.25);
        let b = ActionBreakdown::from_terms(m);
        let v = serde_json::to_value(&b).unwrap();
        assert_eq!(v["terms"]["gradient"], -1.5);
        assert_eq!(v["total"], -1.25);
        let back: ActionBreakdown = serde_json::from_value(v).unwrap();
        assert_eq!(back, b);
        let bad = serde_json::json!({"terms": {"gradient": 1.0}, "total": 2.0});
        assert!(serde_json::from_value::<ActionBreakdown>(bad).is_err());
    }

    #[test]
    fn trajectory_checks() {
        let f = plane(1.0, 1.0, 0.0);
        let inputs = LagrangianInputs::default();
        assert!(matches!(
            effective_action(&[(0.0, f.clone())], &inputs),
            Err(GaugeError::TooFewSnapshots(1))
        ));
        let traj = vec![(0.0, f.clone()), (0.1, f.clone()), (0.3, f.clone())];
        assert!(matches!(
            effective_action(&traj, &inputs),
            Err(GaugeError::NonUniformSpacing { index: 1 })
        ));
    }

    #[test]
    fn static_path_action() {
        let f = plane(1.0, 0.0, 0.0);
        let traj = vec![(0.0, f.clone()), (0.5, f.clone())];
        let s = effective_action(&traj, &LagrangianInputs::default()).unwrap();
        assert_eq!(s.breakdown.get(Term::TimeKinetic), Some(0.0));
        let stat = lagrangian_terms(&f, &LagrangianInputs::default()).unwrap().total();
        assert!((s.action - 0.5 * stat).abs() < 1e-12);
    }
}
