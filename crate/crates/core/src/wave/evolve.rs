//! Second-order Strang splitting:
//! half kinetic step `exp(−i|k|²dt/4)` in Fourier space, full pointwise step
//! `exp(−i(V + γ|ψ|²)dt)`, half kinetic step. Consecutive half kinetic steps
//! between recorded steps are fused into one full step.

use num_complex::Complex64;

use super::observables::occupancy_of;
use super::{well_occupancy, WaveError};
use crate::fft::NdFft;
use crate::grid::{Grid, WaveField};

/// Largest 2D grid accepted by [`evolve`] (256²).
pub const MAX_2D_CELLS: usize = 256 * 256;

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionConfig {
    pub dt: f64,
    pub steps: u64,
    /// Cubic coupling `γ`.
    pub gamma: f64,
    /// Potential sampled on the field's grid.
    pub potential: Option<Vec<f64>>,
    pub record_every: u64,
    /// Split coordinate for left/right occupancy (1D only).
    pub occupancy_split: Option<f64>,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            steps: 0,
            gamma: 0.0,
            potential: None,
            record_every: 1,
            occupancy_split: None,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self, grid: &Grid) -> Result<(), WaveError> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(WaveError::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.record_every == 0 {
            return Err(WaveError::Config("record_every must be >= 1".into()));
        }
        if !self.gamma.is_finite() {
            return Err(WaveError::Config("gamma must be finite".into()));
        }
        if let Some(v) = &self.potential {
            if v.len() != grid.len() {
                return Err(WaveError::PotentialMismatch {
                    expected: grid.len(),
                    actual: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(WaveError::Config("potential contains non-finite values".into()));
            }
        }
        if self.occupancy_split.is_some() && grid.ndim() != 1 {
            return Err(WaveError::NotOneDimensional(grid.ndim()));
        }
        Ok(())
    }
}

/// Recorded observables, one entry per recorded step.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObservableSeries {
    pub times: Vec<f64>,
    /// `Σ|ψ|² dV`
    pub norm: Vec<f64>,
    pub energy: Vec<f64>,
    /// One list per axis.
    pub mean_position: Vec<Vec<f64>>,
    pub well_occupancy: Option<(Vec<f64>, Vec<f64>)>,
}

impl ObservableSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// CSV `time,norm,energy,mean_x[,mean_y][,p_left,p_right]`.
    pub fn to_csv(&self) -> String {
        let axis_names = ["mean_x", "mean_y", "mean_z"];
        let mut header = vec!["time", "norm", "energy"];
        header.extend(axis_names.iter().take(self.mean_position.len()));
        if self.well_occupancy.is_some() {
            header.extend(["p_left", "p_right"]);
        }
        let mut out = header.join(",");
        out.push('\n');
        for i in 0..self.len() {
            let mut row = vec![self.times[i], self.norm[i], self.energy[i]];
            row.extend(self.mean_position.iter().map(|m| m[i]));
            if let Some((l, r)) = &self.well_occupancy {
                row.extend([l[i], r[i]]);
            }
            let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Stateful split-step integrator. Between calls to [`Evolver::advance`] the
/// field is held in real space.
pub struct Evolver {
    grid: Grid,
    psi: Vec<Complex64>,
    fft: NdFft,
    k2: Vec<f64>,
    half_kinetic: Vec<Complex64>,
    full_kinetic: Vec<Complex64>,
    potential: Option<Vec<f64>>,
    gamma: f64,
    dt: f64,
    steps_done: u64,
}

impl Evolver {
    pub fn new(field: WaveField, dt: f64, gamma: f64, potential: Option<Vec<f64>>) -> Result<Self, WaveError> {
        let grid = field.grid().clone();
        let cfg = EvolutionConfig {
            dt,
            gamma,
            potential,
            ..EvolutionConfig::default()
        };
        cfg.validate(&grid)?;
        let k2 = grid.k_squared();
        let half_kinetic = k2.iter().map(|k| Complex64::from_polar(1.0, -k * dt / 4.0)).collect();
        let full_kinetic = k2.iter().map(|k| Complex64::from_polar(1.0, -k * dt / 2.0)).collect();
        Ok(Self {
            fft: NdFft::new(&grid.shape()),
            psi: field.into_samples(),
            grid,
            k2,
            half_kinetic,
            full_kinetic,
            potential: cfg.potential,
            gamma,
            dt,
            steps_done: 0,
        })
    }

    pub fn time(&self) -> f64 {
        self.steps_done as f64 * self.dt
    }

    pub fn steps_done(&self) -> u64 {
        self.steps_done
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.psi
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn field(&self) -> WaveField {
        WaveField::new(self.grid.clone(), self.psi.clone()).expect("evolver keeps samples finite")
    }

    pub fn into_field(self) -> WaveField {
        WaveField::new(self.grid, self.psi).expect("evolver keeps samples finite")
    }

    fn kinetic(&mut self, factors_full: bool) {
        self.fft.forward(&mut self.psi);
        let f = if factors_full { &self.full_kinetic } else { &self.half_kinetic };
        self.psi.iter_mut().zip(f).for_each(|(z, k)| *z *= k);
        self.fft.inverse(&mut self.psi);
    }

    fn pointwise(&mut self, step: u64) -> Result<(), WaveError> {
        let dt = self.dt;
        let gamma = self.gamma;
        let mut finite = true;
        match &self.potential {
            Some(v) => {
                for (z, vi) in self.psi.iter_mut().zip(v) {
                    let d = z.norm_sqr();
                    finite &= d.is_finite();
                    *z *= Complex64::from_polar(1.0, -(vi + gamma * d) * dt);
                }
            }
            None if gamma != 0.0 => {
                for z in self.psi.iter_mut() {
                    let d = z.norm_sqr();
                    finite &= d.is_finite();
                    *z *= Complex64::from_polar(1.0, -gamma * d * dt);
                }
            }
            None => {
                finite = self.psi.iter().all(|z| z.re.is_finite() && z.im.is_finite());
            }
        }
        if finite {
            Ok(())
        } else {
            Err(WaveError::NonFinite { step })
        }
    }

    /// Advances `n` full steps.
    pub fn advance(&mut self, n: u64) -> Result<(), WaveError> {
        if n == 0 {
            return Ok(());
        }
        self.kinetic(false);
        for s in 1..=n {
            self.pointwise(self.steps_done + s)?;
            self.kinetic(s < n);
        }
        self.steps_done += n;
        Ok(())
    }

    pub fn norm(&self) -> f64 {
        self.psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell_volume()
    }

    /// `E = ∫ ½|∇ψ|² + V|ψ|² + (γ/2)|ψ|⁴ dV`, kinetic part evaluated spectrally.
    pub fn energy(&mut self) -> f64 {
        let mut hat = self.psi.clone();
        self.fft.forward(&mut hat);
        energy_from_parts(&self.grid, &self.psi, &hat, &self.k2, self.potential.as_deref(), self.gamma)
    }

    pub fn mean_position(&self) -> Vec<f64> {
        mean_position(&self.grid, &self.psi)
    }
}

fn energy_from_parts(
    grid: &Grid,
    psi: &[Complex64],
    hat: &[Complex64],
    k2: &[f64],
    potential: Option<&[f64]>,
    gamma: f64,
) -> f64 {
    let dv = grid.cell_volume();
    let n = psi.len() as f64;
    let kinetic = 0.5 * hat.iter().zip(k2).map(|(z, k)| k * z.norm_sqr()).sum::<f64>() / n;
    let pot: f64 = potential.map_or(0.0, |v| psi.iter().zip(v).map(|(z, v)| v * z.norm_sqr()).sum());
    let nonlinear: f64 = 0.5 * gamma * psi.iter().map(|z| z.norm_sqr().powi(2)).sum::<f64>();
    (kinetic + pot + nonlinear) * dv
}

/// Energy of a field with optional potential and cubic coupling.
pub fn field_energy(field: &WaveField, potential: Option<&[f64]>, gamma: f64) -> f64 {
    let grid = field.grid();
    let mut hat = field.samples().to_vec();
    NdFft::new(&grid.shape()).forward(&mut hat);
    energy_from_parts(grid, field.samples(), &hat, &grid.k_squared(), potential, gamma)
}

fn mean_position(grid: &Grid, psi: &[Complex64]) -> Vec<f64> {
    let total: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    let mut acc = vec![0.0; grid.ndim()];
    for (i, z) in psi.iter().enumerate() {
        let p = grid.point(i);
        let d = z.norm_sqr();
        for (a, x) in acc.iter_mut().zip(p) {
            *a += x * d;
        }
    }
    acc.into_iter().map(|a| a / total).collect()
}

/// Evolves `field` for `config.steps` steps, recording observables at step 0
/// and every `record_every` steps.
pub fn evolve(field: &WaveField, config: &EvolutionConfig) -> Result<(WaveField, ObservableSeries), WaveError> {
    let grid = field.grid();
    config.validate(grid)?;
    let cells = grid.len();
    if grid.ndim() > 2 || (grid.ndim() == 2 && cells > MAX_2D_CELLS) {
        return Err(WaveError::UnsupportedGrid {
            dims: grid.ndim(),
            cells,
            max: MAX_2D_CELLS,
        });
    }
    if field.norm() <= 0.0 {
        return Err(WaveError::Grid(crate::grid::GridError::ZeroNorm));
    }
    if config.steps == 0 {
        let mut series = ObservableSeries {
            mean_position: vec![Vec::new(); grid.ndim()],
            well_occupancy: config.occupancy_split.map(|_| (Vec::new(), Vec::new())),
            ..ObservableSeries::default()
        };
        record(&mut series, field, 0.0, config)?;
        return Ok((field.clone(), series));
    }

    let mut ev = Evolver::new(field.clone(), config.dt, config.gamma, config.potential.clone())?;
    let mut series = ObservableSeries {
        mean_position: vec![Vec::new(); grid.ndim()],
        well_occupancy: config.occupancy_split.map(|_| (Vec::new(), Vec::new())),
        ..ObservableSeries::default()
    };
    record_evolver(&mut series, &mut ev, config)?;
    let mut remaining = config.steps;
    while remaining > 0 {
        let chunk = remaining.min(config.record_every);
        ev.advance(chunk)?;
        remaining -= chunk;
        if ev.steps_done() % config.record_every == 0 {
            record_evolver(&mut series, &mut ev, config)?;
        }
    }
    Ok((ev.into_field(), series))
}

fn record(series: &mut ObservableSeries, field: &WaveField, t: f64, config: &EvolutionConfig) -> Result<(), WaveError> {
    series.times.push(t);
    series.norm.push(field.norm());
    series
        .energy
        .push(field_energy(field, config.potential.as_deref(), config.gamma));
    for (m, v) in series.mean_position.iter_mut().zip(mean_position(field.grid(), field.samples())) {
        m.push(v);
    }
    if let (Some(split), Some((l, r))) = (config.occupancy_split, series.well_occupancy.as_mut()) {
        let (pl, pr) = well_occupancy(field, split)?;
        l.push(pl);
        r.push(pr);
    }
    Ok(())
}

fn record_evolver(series: &mut ObservableSeries, ev: &mut Evolver, config: &EvolutionConfig) -> Result<(), WaveError> {
    series.times.push(ev.time());
    series.norm.push(ev.norm());
    let e = ev.energy();
    series.energy.push(e);
    for (m, v) in series.mean_position.iter_mut().zip(ev.mean_position()) {
        m.push(v);
    }
    if let (Some(split), Some((l, r))) = (config.occupancy_split, series.well_occupancy.as_mut()) {
        let (pl, pr) = occupancy_of(ev.grid(), ev.samples(), split)?;
        l.push(pl);
        r.push(pr);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(grid: Grid, sigma: f64, k0: f64) -> WaveField {
        WaveField::from_fn(grid, |x| {
            Complex64::from_polar((-x[0] * x[0] / (4.0 * sigma * sigma)).exp(), k0 * x[0])
        })
        .unwrap()
        .normalized()
        .unwrap()
    }

    #[test]
    fn zero_steps_is_identity() {
        let f = gaussian(Grid::line(-10.0, 10.0, 64).unwrap(), 1.0, 0.5);
        let cfg = EvolutionConfig::default();
        let (out, series) = evolve(&f, &cfg).unwrap();
        assert_eq!(out, f);
        assert_eq!(series.len(), 1);
        assert_eq!(series.times, vec![0.0]);
    }

    #[test]
    fn recording_stride() {
        let f = gaussian(Grid::line(-10.0, 10.0, 64).unwrap(), 1.0, 0.0);
        let cfg = EvolutionConfig {
            steps: 10,
            record_every: 4,
            ..EvolutionConfig::default()
        };
        let (_, s) = evolve(&f, &cfg).unwrap();
        assert_eq!(s.len(), 3);
        assert!((s.times[2] - 8e-3).abs() < 1e-15);
    }

    #[test]
    fn fused_and_unfused_stepping_agree() {
        let f = gaussian(Grid::line(-10.0, 10.0, 128).unwrap(), 1.0, 1.0);
        let mut a = Evolver::new(f.clone(), 1e-2, -1.0, None).unwrap();
        a.advance(20).unwrap();
        let mut b = Evolver::new(f, 1e-2, -1.0, None).unwrap();
        for _ in 0..20 {
            b.advance(1).unwrap();
        }
        for (x, y) in a.samples().iter().zip(b.samples()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn plane_wave_moves_at_group_velocity() {
        let grid = Grid::line(-20.0, 20.0, 256).unwrap();
        let f = gaussian(grid, 1.5, 2.0);
        let cfg = EvolutionConfig {
            dt: 1e-2,
            steps: 200,
            record_every: 200,
            ..EvolutionConfig::default()
        };
        let (_, s) = evolve(&f, &cfg).unwrap();
        // <x>(t) = k0 t for an unconfined packet
        assert!((s.mean_position[0][1] - 4.0).abs() < 1e-6);
    }

    #[test]
    fn two_dimensional_norm_conserved() {
        let grid = Grid::square(-8.0, 8.0, 64).unwrap();
        let f = WaveField::from_fn(grid.clone(), |p| {
            Complex64::from_polar((-(p[0] * p[0] + p[1] * p[1]) / 2.0).exp(), p[0])
        })
        .unwrap();
        let v = grid.sample(|p| 0.5 * (p[0] * p[0] + p[1] * p[1]));
        let cfg = EvolutionConfig {
            dt: 1e-3,
            steps: 500,
            gamma: 0.5,
            potential: Some(v),
            record_every: 100,
            ..EvolutionConfig::default()
        };
        let (_, s) = evolve(&f, &cfg).unwrap();
        let n0 = s.norm[0];
        assert!(s.norm.iter().all(|n| ((n - n0) / n0).abs() < 1e-12));
        assert_eq!(s.mean_position.len(), 2);
    }

    #[test]
    fn config_errors() {
        let grid = Grid::line(-1.0, 1.0, 16).unwrap();
        let f = gaussian(grid.clone(), 0.3, 0.0);
        let bad = EvolutionConfig { dt: 0.0, ..EvolutionConfig::default() };
        assert!(matches!(evolve(&f, &bad), Err(WaveError::Config(_))));
        let bad = EvolutionConfig { potential: Some(vec![0.0; 3]), ..EvolutionConfig::default() };
        assert!(matches!(evolve(&f, &bad), Err(WaveError::PotentialMismatch { expected: 16, actual: 3 })));
        let big = WaveField::zeros(Grid::square(0.0, 1.0, 512).unwrap());
        let cfg = EvolutionConfig { steps: 1, ..EvolutionConfig::default() };
        assert!(matches!(evolve(&big, &cfg), Err(WaveError::UnsupportedGrid { .. })));
    }

    #[test]
    fn non_finite_aborts_with_step() {
        let grid = Grid::line(-1.0, 1.0, 16).unwrap();
        let f = gaussian(grid, 0.3, 0.0);
        let cfg = EvolutionConfig {
            steps: 5,
            gamma: f64::MAX,
            ..EvolutionConfig::default()
        };
        match evolve(&f, &cfg) {
            Err(WaveError::NonFinite { step }) => assert!(step >= 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn series_csv_columns() {
        let grid = Grid::line(-5.0, 5.0, 32).unwrap();
        let f = gaussian(grid, 0.5, 0.0);
        let cfg = EvolutionConfig {
            steps: 2,
            occupancy_split: Some(0.0),
            ..EvolutionConfig::default()
        };
        let (_, s) = evolve(&f, &cfg).unwrap();
        let csv = s.to_csv();
        assert!(csv.starts_with("time,norm,energy,mean_x,p_left,p_right\n"));
        assert_eq!(csv.lines().count(), 4);
    }
}
