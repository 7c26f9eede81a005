//! Double-well and Mexican-hat landscapes.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::{unit_f64, SplitMix64};

#[derive(Debug, Error)]
pub enum PotentialError {
    #[error("parameter {name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("grid needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
}

fn positive(name: &'static str, value: f64) -> Result<f64, PotentialError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(PotentialError::NonPositive { name, value })
    }
}

/// `V(x) = c (x² − v²)²` with minima at `x = ±v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DoubleWellRaw")]
pub struct DoubleWellParams {
    c: f64,
    v: f64,
}

#[derive(Deserialize)]
struct DoubleWellRaw {
    c: f64,
    v: f64,
}

impl TryFrom<DoubleWellRaw> for DoubleWellParams {
    type Error = PotentialError;
    fn try_from(r: DoubleWellRaw) -> Result<Self, Self::Error> {
        Self::new(r.c, r.v)
    }
}

impl DoubleWellParams {
    pub fn new(c: f64, v: f64) -> Result<Self, PotentialError> {
        Ok(Self {
            c: positive("c", c)?,
            v: positive("v", v)?,
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    /// Height of the central barrier, `V(0) = c v⁴`.
    pub fn barrier_height(&self) -> f64 {
        self.c * self.v.powi(4)
    }
}

pub fn double_well_eval(params: &DoubleWellParams, x: f64) -> f64 {
    let d = x * x - params.v * params.v;
    params.c * d * d
}

/// `V(ψ) = −μ²|ψ|² + 2λ|ψ|⁴`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MexicanHatRaw")]
pub struct MexicanHatParams {
    mu2: f64,
    lambda: f64,
}

#[derive(Deserialize)]
struct MexicanHatRaw {
    mu2: f64,
    lambda: f64,
}

impl TryFrom<MexicanHatRaw> for MexicanHatParams {
    type Error = PotentialError;
    fn try_from(r: MexicanHatRaw) -> Result<Self, Self::Error> {
        Self::new(r.mu2, r.lambda)
    }
}

impl MexicanHatParams {
    pub fn new(mu2: f64, lambda: f64) -> Result<Self, PotentialError> {
        Ok(Self {
            mu2: positive("mu2", mu2)?,
            lambda: positive("lambda", lambda)?,
        })
    }

    pub fn mu2(&self) -> f64 {
        self.mu2
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

pub fn mexican_hat_eval(params: &MexicanHatParams, psi: Complex64) -> f64 {
    mexican_hat_radial(params, psi.norm())
}

/// `V` as a function of `r = |ψ|`.
pub fn mexican_hat_radial(params: &MexicanHatParams, r: f64) -> f64 {
    let u = r * r;
    -params.mu2 * u + 2.0 * params.lambda * u * u
}

/// `dV/dr = −2μ² r + 8λ r³`.
pub fn mexican_hat_radial_derivative(params: &MexicanHatParams, r: f64) -> f64 {
    -2.0 * params.mu2 * r + 8.0 * params.lambda * r * r * r
}

/// Minimizer of the implemented potential: `|ψ| = sqrt(μ² / (4λ))`.
pub fn vacuum_magnitude(params: &MexicanHatParams) -> f64 {
    (params.mu2 / (4.0 * params.lambda)).sqrt()
}

/// The alternative normalization `sqrt(μ² / (2λ))`, reported for comparison
/// only; it is not a stationary point of [`mexican_hat_eval`].
pub fn stated_vacuum_magnitude(params: &MexicanHatParams) -> f64 {
    (params.mu2 / (2.0 * params.lambda)).sqrt()
}

/// A point `|v| e^{iθ}` on the degenerate minimum circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VacuumState {
    pub magnitude: f64,
    pub theta: f64,
}

impl VacuumState {
    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.magnitude, self.theta)
    }
}

/// Picks a vacuum phase from the seeded generator: `θ = 2π · u`, where `u` is
/// the first uniform draw of [`SplitMix64`] for `seed`.
pub fn break_symmetry(params: &MexicanHatParams, seed: u64) -> VacuumState {
    let u = unit_f64(SplitMix64::at(seed, 0));
    let theta = TAU * u;
    VacuumState {
        magnitude: vacuum_magnitude(params),
        theta: if theta >= TAU { 0.0 } else { theta },
    }
}

/// JSON diagnostics `{magnitude, theta, stated_magnitude}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VacuumDiagnostics {
    pub magnitude: f64,
    pub theta: f64,
    pub stated_magnitude: f64,
}

impl VacuumDiagnostics {
    pub fn new(params: &MexicanHatParams, vacuum: &VacuumState) -> Self {
        Self {
            magnitude: vacuum.magnitude,
            theta: vacuum.theta,
            stated_magnitude: stated_vacuum_magnitude(params),
        }
    }
}

/// A potential that can be sampled along a real coordinate. The Mexican hat
/// is sampled along the real axis `ψ = x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialKind {
    DoubleWell(DoubleWellParams),
    MexicanHat(MexicanHatParams),
}

impl PotentialKind {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::DoubleWell(p) => double_well_eval(p, x),
            Self::MexicanHat(p) => mexican_hat_radial(p, x.abs()),
        }
    }
}

/// Uniform samples of a potential, endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialGrid {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
}

impl PotentialGrid {
    /// CSV with header `x,V(x)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,V(x)\n");
        for (x, v) in self.xs.iter().zip(&self.values) {
            out.push_str(&format!("{x:?},{v:?}\n"));
        }
        out
    }
}

pub fn sample_grid(potential: &PotentialKind, lo: f64, hi: f64, n: usize) -> Result<PotentialGrid, PotentialError> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(PotentialError::InvalidRange { lo, hi });
    }
    if n < 2 {
        return Err(PotentialError::TooFewSamples(n));
    }
    let span = hi - lo;
    let last = (n - 1) as f64;
    let xs: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + span * (i as f64) / last })
        .collect();
    let values = xs.iter().map(|&x| potential.eval(x)).collect();
    Ok(PotentialGrid { xs, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        while (b - a).abs() > tol {
            if f(c) < f(d) {
                b = d;
            } else {
                a = c;
            }
            c = b - g * (b - a);
            d = a + g * (b - a);
        }
        0.5 * (a + b)
    }

    #[test]
    fn double_well_values() {
        let p = DoubleWellParams::new(2.0, 1.5).unwrap();
        assert_eq!(double_well_eval(&p, 1.5), 0.0);
        assert_eq!(double_well_eval(&p, -1.5), 0.0);
        assert!((double_well_eval(&p, 0.0) - 2.0 * 1.5f64.powi(4)).abs() < 1e-12);
        assert!(DoubleWellParams::new(0.0, 1.0).is_err());
        assert!(DoubleWellParams::new(1.0, -1.0).is_err());
    }

    proptest! {
        #[test]
        fn double_well_even_and_nonnegative(x in -10.0f64..10.0, c in 0.1f64..5.0, v in 0.1f64..3.0) {
            let p = DoubleWellParams::new(c, v).unwrap();
            prop_assert!(double_well_eval(&p, x) >= 0.0);
            prop_assert_eq!(double_well_eval(&p, x), double_well_eval(&p, -x));
        }

        #[test]
        fn mexican_hat_u1_symmetric(r in 0.0f64..3.0, phase in 0.0f64..TAU, shift in 0.0f64..TAU) {
            let p = MexicanHatParams::new(1.3, 0.4).unwrap();
            let a = mexican_hat_eval(&p, Complex64::from_polar(r, phase));
            let b = mexican_hat_eval(&p, Complex64::from_polar(r, phase) * Complex64::from_polar(1.0, shift));
            prop_assert!((a - b).abs() < 1e-12);
            let vac = vacuum_magnitude(&p);
            prop_assert!(a >= mexican_hat_radial(&p, vac) - 1e-12);
        }
    }

    #[test]
    fn vacuum_magnitude_examples() {
        assert!((vacuum_magnitude(&MexicanHatParams::new(1.0, 0.25).unwrap()) - 1.0).abs() < 1e-15);
        assert!((vacuum_magnitude(&MexicanHatParams::new(2.0, 0.5).unwrap()) - 1.0).abs() < 1e-15);
        let a = vacuum_magnitude(&MexicanHatParams::new(0.7, 0.3).unwrap());
        let b = vacuum_magnitude(&MexicanHatParams::new(7.0, 3.0).unwrap());
        assert!((a - b).abs() < 1e-15);
        let p = MexicanHatParams::new(1.0, 0.25).unwrap();
        assert!((stated_vacuum_magnitude(&p) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn analytic_minimum_matches_numeric_minimizer() {
        for (mu2, lambda) in [(1.0, 0.25), (2.0, 0.5), (0.3, 1.7), (5.0, 0.1)] {
            let p = MexicanHatParams::new(mu2, lambda).unwrap();
            let r = golden_section(|r| mexican_hat_radial(&p, r), 0.0, 10.0, 1e-12);
            // Golden-section search resolves a minimum only to ~√ε relative.
            assert!((r - (mu2 / (4.0 * lambda)).sqrt()).abs() < 1e-6);
            assert!(mexican_hat_radial_derivative(&p, vacuum_magnitude(&p)).abs() < 1e-8);
        }
    }

    #[test]
    fn symmetry_breaking_deterministic() {
        let p = MexicanHatParams::new(1.0, 0.25).unwrap();
        assert_eq!(break_symmetry(&p, 17), break_symmetry(&p, 17));
        assert_ne!(break_symmetry(&p, 17).theta, break_symmetry(&p, 18).theta);
        for s in 0..50 {
            let v = break_symmetry(&p, s);
            assert_eq!(v.magnitude, 1.0);
            assert!((0.0..TAU).contains(&v.theta));
        }
    }

    #[test]
    fn grid_sampling() {
        let p = DoubleWellParams::new(1.3, 0.8).unwrap();
        let k = PotentialKind::DoubleWell(p);
        let g = sample_grid(&k, -1.6, 1.6, 5).unwrap();
        let want = 9.0 * 1.3 * 0.8f64.powi(4);
        assert!((g.values[0] - want).abs() < 1e-12);
        assert!((g.values[4] - want).abs() < 1e-12);

        let g2 = sample_grid(&k, -1.0, 2.0, 2).unwrap();
        assert_eq!(g2.xs, vec![-1.0, 2.0]);
        assert_eq!(g2.values, vec![double_well_eval(&p, -1.0), double_well_eval(&p, 2.0)]);

        let coarse = sample_grid(&k, -2.3, 1.7, 9).unwrap();
        let fine = sample_grid(&k, -2.3, 1.7, 17).unwrap();
        for i in 0..9 {
            assert_eq!(coarse.xs[i], fine.xs[2 * i]);
            assert_eq!(coarse.values[i], fine.values[2 * i]);
        }
        assert!(matches!(sample_grid(&k, 1.0, 1.0, 4), Err(PotentialError::InvalidRange { .. })));
        assert!(matches!(sample_grid(&k, 0.0, 1.0, 1), Err(PotentialError::TooFewSamples(1))));
    }

    #[test]
    fn grid_csv_header() {
        let k = PotentialKind::MexicanHat(MexicanHatParams::new(1.0, 0.25).unwrap());
        let g = sample_grid(&k, 0.0, 1.0, 2).unwrap();
        assert_eq!(g.to_csv(), "x,V(x)\n0.0,0.0\n1.0,-0.5\n");
    }
}
