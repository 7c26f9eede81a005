//! Tunneling period of the double well, measured two ways: from the
//! splitting of the two lowest finite-difference levels, and from the
//! left-well occupancy of a left-localized packet under split-step evolution.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::observables::occupancy_of;
use super::{stationary_states, Evolver, StationaryState, WaveError};
use crate::grid::{Grid, WaveField};
use crate::potential::{double_well_eval, DoubleWellParams};

const HYSTERESIS: f64 = 0.01;
const MIN_SWING: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TunnelingStart {
    /// `(φ₀ ± φ₁)/√2`, whichever sign puts more weight left of the barrier.
    #[default]
    LeftLocalized,
    /// The ground state alone, explicitly mirror-symmetrized. Never oscillates.
    Symmetric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TunnelingConfig {
    pub params: DoubleWellParams,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub dt: f64,
    #[serde(default)]
    pub start: TunnelingStart,
    /// Evolution horizon; defaults to three spectral periods.
    #[serde(default)]
    pub max_time: Option<f64>,
    /// Steps between occupancy samples.
    #[serde(default = "default_sample_every")]
    pub sample_every: u64,
}

fn default_sample_every() -> u64 {
    10
}

impl TunnelingConfig {
    pub fn new(params: DoubleWellParams, lo: f64, hi: f64, n: usize, dt: f64) -> Self {
        Self {
            params,
            lo,
            hi,
            n,
            dt,
            start: TunnelingStart::LeftLocalized,
            max_time: None,
            sample_every: default_sample_every(),
        }
    }

    pub fn grid(&self) -> Result<Grid, WaveError> {
        Ok(Grid::line(self.lo, self.hi, self.n)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralPeriod {
    pub e0: f64,
    pub e1: f64,
    pub delta_e: f64,
    pub barrier: f64,
    /// `π / ΔE`: time for the packet to move from one well to the other.
    pub period: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TunnelingResult {
    pub spectral: SpectralPeriod,
    /// Half the first-return time of the left-occupancy maximum.
    pub t_measured: f64,
    pub t_spectral: f64,
    pub first_return_time: f64,
    /// Time of the first left-occupancy minimum.
    pub transfer_time: f64,
    pub relative_error: f64,
    pub min_left_occupancy: f64,
}

fn well_states(params: &DoubleWellParams, grid: &Grid) -> Result<(SpectralPeriod, Vec<StationaryState>), WaveError> {
    let potential = grid.sample(|x| double_well_eval(params, x[0]));
    let states = stationary_states(grid, &potential, 2)?;
    let (e0, e1) = (states[0].energy, states[1].energy);
    let barrier = params.barrier_height();
    if e1 >= barrier {
        return Err(WaveError::NotTunnelingRegime { e1, barrier });
    }
    let delta_e = e1 - e0;
    Ok((
        SpectralPeriod {
            e0,
            e1,
            delta_e,
            barrier,
            period: PI / delta_e,
        },
        states,
    ))
}

pub fn spectral_tunneling_period(params: &DoubleWellParams, grid: &Grid) -> Result<SpectralPeriod, WaveError> {
    well_states(params, grid).map(|(s, _)| s)
}

fn mirror(grid: &Grid, v: &[f64]) -> Result<Vec<f64>, WaveError> {
    // x ↦ −x maps index j to (n − j) mod n only when the grid is centred.
    let axis = &grid.axes()[0];
    if (axis.min + axis.max()).abs() > 1e-12 * axis.length {
        return Err(WaveError::Config("symmetric start needs a grid centred on zero".into()));
    }
    let n = v.len();
    Ok((0..n).map(|j| 0.5 * (v[j] + v[(n - j) % n])).collect())
}

fn initial_field(grid: &Grid, states: &[StationaryState], start: TunnelingStart) -> Result<WaveField, WaveError> {
    let real = match start {
        TunnelingStart::Symmetric => mirror(grid, &states[0].vector)?,
        TunnelingStart::LeftLocalized => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let plus: Vec<f64> = states[0].vector.iter().zip(&states[1].vector).map(|(a, b)| s * (a + b)).collect();
            let minus: Vec<f64> = states[0].vector.iter().zip(&states[1].vector).map(|(a, b)| s * (a - b)).collect();
            let left = |v: &[f64]| -> Result<f64, WaveError> {
                let z: Vec<Complex64> = v.iter().map(|x| Complex64::new(*x, 0.0)).collect();
                Ok(occupancy_of(grid, &z, 0.0)?.0)
            };
            if left(&plus)? >= left(&minus)? {
                plus
            } else {
                minus
            }
        }
    };
    Ok(WaveField::new(grid.clone(), real.into_iter().map(|x| Complex64::new(x, 0.0)).collect())?.normalized()?)
}

/// Vertex of the parabola through three equally spaced samples.
fn refine_peak(t: [f64; 3], p: [f64; 3]) -> f64 {
    let denom = p[0] - 2.0 * p[1] + p[2];
    if denom.abs() < f64::EPSILON {
        return t[1];
    }
    let h = t[1] - t[0];
    t[1] + 0.5 * h * (p[0] - p[2]) / denom
}

/// Index of the extremum (min if `lowest`) between `from` and `to` inclusive.
fn extremum(p: &[f64], from: usize, to: usize, lowest: bool) -> usize {
    let mut best = from;
    for i in from..=to {
        if (lowest && p[i] < p[best]) || (!lowest && p[i] > p[best]) {
            best = i;
        }
    }
    best
}

fn refined(times: &[f64], p: &[f64], i: usize) -> f64 {
    if i == 0 || i + 1 >= p.len() {
        return times[i];
    }
    refine_peak([times[i - 1], times[i], times[i + 1]], [p[i - 1], p[i], p[i + 1]])
}

/// Measure the tunneling period by evolving a left-localized packet.
///
/// The left occupancy follows `½ + ½ cos(ΔE t)`; its first minimum sits at
/// `π/ΔE` and its first return to the maximum at `2π/ΔE`. The reported
/// `t_measured` is half the return time, directly comparable with `π/ΔE`.
pub fn tunneling_period(config: &TunnelingConfig) -> Result<TunnelingResult, WaveError> {
    if config.sample_every == 0 {
        return Err(WaveError::Config("sample_every must be >= 1".into()));
    }
    let grid = config.grid()?;
    let (spectral, states) = well_states(&config.params, &grid)?;
    let max_time = config.max_time.unwrap_or(3.0 * spectral.period);
    if !(max_time.is_finite() && max_time > 0.0) {
        return Err(WaveError::Config(format!("max_time must be positive, got {max_time}")));
    }
    let field = initial_field(&grid, &states, config.start)?;
    let potential = grid.sample(|x| double_well_eval(&config.params, x[0]));
    let mut ev = Evolver::new(field, config.dt, 0.0, Some(potential))?;

    let mut times = vec![0.0];
    let mut left = vec![occupancy_of(&grid, ev.samples(), 0.0)?.0];
    let p0 = left[0];
    let mut max_deviation: f64 = 0.0;

    // Phase 1: descend until the occupancy has risen HYSTERESIS above its running minimum.
    // Phase 2: ascend until it has dropped HYSTERESIS below its running maximum.
    let mut min_idx: Option<usize> = None;
    let mut run_min = 0usize;
    let mut run_max = 0usize;
    while ev.time() < max_time {
        ev.advance(config.sample_every)?;
        let p = occupancy_of(&grid, ev.samples(), 0.0)?.0;
        times.push(ev.time());
        left.push(p);
        max_deviation = max_deviation.max((p - 0.5).abs());
        let i = left.len() - 1;
        match min_idx {
            None => {
                if p < left[run_min] {
                    run_min = i;
                }
                if p > left[run_min] + HYSTERESIS && p0 - left[run_min] > MIN_SWING {
                    let m = extremum(&left, run_min, i, true);
                    min_idx = Some(m);
                    run_max = m;
                }
            }
            Some(m) => {
                if p > left[run_max] {
                    run_max = i;
                }
                if p < left[run_max] - HYSTERESIS && left[run_max] - left[m] > MIN_SWING {
                    let transfer_time = refined(&times, &left, m);
                    let first_return_time = refined(&times, &left, run_max);
                    let t_measured = 0.5 * first_return_time;
                    return Ok(TunnelingResult {
                        t_spectral: spectral.period,
                        relative_error: (t_measured - spectral.period).abs() / spectral.period,
                        spectral,
                        t_measured,
                        first_return_time,
                        transfer_time,
                        min_left_occupancy: left[m],
                    });
                }
            }
        }
    }
    max_deviation = max_deviation.max((p0 - 0.5).abs());
    Err(WaveError::NoOscillation { max_time, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola_vertex() {
        // p = −(t − 1.3)² sampled at 1, 1.5, 2.
        let f = |t: f64| -(t - 1.3) * (t - 1.3);
        let v = refine_peak([1.0, 1.5, 2.0], [f(1.0), f(1.5), f(2.0)]);
        assert!((v - 1.3).abs() < 1e-12);
    }

    #[test]
    fn shallow_well_is_not_tunneling() {
        let p = DoubleWellParams::new(0.1, 1.0).unwrap();
        let grid = Grid::line(-6.0, 6.0, 128).unwrap();
        assert!(matches!(
            spectral_tunneling_period(&p, &grid),
            Err(WaveError::NotTunnelingRegime { .. })
        ));
    }

    #[test]
    fn left_start_is_left_heavy() {
        let p = DoubleWellParams::new(1.0, 1.5).unwrap();
        let grid = Grid::line(-6.0, 6.0, 256).unwrap();
        let (_, states) = well_states(&p, &grid).unwrap();
        let f = initial_field(&grid, &states, TunnelingStart::LeftLocalized).unwrap();
        assert!(occupancy_of(&grid, f.samples(), 0.0).unwrap().0 > 0.95);
    }
}
