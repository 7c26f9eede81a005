//! Uniform periodic grids and complex fields sampled on them.
//!
//! Axis `a` covers `[min, min + length)` with `n` points at
//! `min + j * length / n`; the right endpoint is the periodic image of the
//! left. Samples are stored row-major (last axis fastest).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fft::{wavenumbers, NdFft};

pub const MAX_DIMS: usize = 3;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("grid needs 1..={MAX_DIMS} axes, got {0}")]
    BadDimension(usize),
    #[error("axis {axis}: {reason}")]
    BadAxis { axis: usize, reason: String },
    #[error("expected {expected} samples, got {actual}")]
    SampleCount { expected: usize, actual: usize },
    #[error("grids do not match")]
    Mismatch,
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("field has zero norm")]
    ZeroNorm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub length: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(min: f64, length: f64, n: usize) -> Self {
        Self { min, length, n }
    }

    /// Axis covering `[lo, hi)` with `n` points.
    pub fn span(lo: f64, hi: f64, n: usize) -> Self {
        Self::new(lo, hi - lo, n)
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn coord(&self, j: usize) -> f64 {
        self.min + j as f64 * self.spacing()
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.coord(j)).collect()
    }

    pub fn max(&self) -> f64 {
        self.min + self.length
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    axes: Vec<Axis>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self, GridError> {
        if axes.is_empty() || axes.len() > MAX_DIMS {
            return Err(GridError::BadDimension(axes.len()));
        }
        for (i, a) in axes.iter().enumerate() {
            if a.n < 2 {
                return Err(GridError::BadAxis {
                    axis: i,
                    reason: format!("needs at least 2 points, got {}", a.n),
                });
            }
            if !(a.length.is_finite() && a.length > 0.0 && a.min.is_finite()) {
                return Err(GridError::BadAxis {
                    axis: i,
                    reason: format!("invalid extent min={} length={}", a.min, a.length),
                });
            }
        }
        Ok(Self { axes })
    }

    pub fn line(lo: f64, hi: f64, n: usize) -> Result<Self, GridError> {
        Self::new(vec![Axis::span(lo, hi, n)])
    }

    pub fn square(lo: f64, hi: f64, n: usize) -> Result<Self, GridError> {
        Self::new(vec![Axis::span(lo, hi, n); 2])
    }

    pub fn cube(lo: f64, hi: f64, n: usize) -> Result<Self, GridError> {
        Self::new(vec![Axis::span(lo, hi, n); 3])
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn ndim(&self) -> usize {
        self.axes.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.n).collect()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(Axis::spacing).product()
    }

    /// Multi-index of flat index `flat`.
    pub fn unravel(&self, mut flat: usize) -> [usize; MAX_DIMS] {
        let mut idx = [0; MAX_DIMS];
        for (d, a) in self.axes.iter().enumerate().rev() {
            idx[d] = flat % a.n;
            flat /= a.n;
        }
        idx
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        self.axes.iter().zip(idx).fold(0, |acc, (a, &i)| acc * a.n + i)
    }

    /// Physical coordinates of flat index `flat` (unused trailing axes are 0).
    pub fn point(&self, flat: usize) -> [f64; MAX_DIMS] {
        let idx = self.unravel(flat);
        let mut p = [0.0; MAX_DIMS];
        for (d, a) in self.axes.iter().enumerate() {
            p[d] = a.coord(idx[d]);
        }
        p
    }

    /// Samples `f` at every grid point.
    pub fn sample<T>(&self, f: impl Fn(&[f64]) -> T) -> Vec<T> {
        let nd = self.ndim();
        (0..self.len()).map(|i| f(&self.point(i)[..nd])).collect()
    }

    /// `|k|²` in FFT layout.
    pub(crate) fn k_squared(&self) -> Vec<f64> {
        let ks: Vec<Vec<f64>> = self.axes.iter().map(|a| wavenumbers(a.n, a.length)).collect();
        (0..self.len())
            .map(|i| {
                let idx = self.unravel(i);
                ks.iter().enumerate().map(|(d, k)| k[idx[d]] * k[idx[d]]).sum()
            })
            .collect()
    }

    /// Same shape and geometry up to rounding (grids read back from sidecars
    /// are rebuilt from their extents).
    pub fn check_same(&self, other: &Grid) -> Result<(), GridError> {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
        let same = self.axes.len() == other.axes.len()
            && self
                .axes
                .iter()
                .zip(&other.axes)
                .all(|(a, b)| a.n == b.n && close(a.min, b.min) && close(a.length, b.length));
        if same {
            Ok(())
        } else {
            Err(GridError::Mismatch)
        }
    }
}

/// Differencing scheme shared by every derivative in one computation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeScheme {
    /// Fourier differentiation; the Nyquist mode of even axes is dropped.
    #[default]
    Spectral,
    /// Second-order periodic central differences.
    Central,
}

/// `∂ f / ∂ x_axis` of complex samples on `grid`.
pub fn derivative(grid: &Grid, data: &[Complex64], axis: usize, scheme: DerivativeScheme) -> Vec<Complex64> {
    assert_eq!(data.len(), grid.len(), "sample count must match grid");
    assert!(axis < grid.ndim(), "axis out of range");
    match scheme {
        DerivativeScheme::Spectral => {
            let a = grid.axes[axis];
            let mut k = wavenumbers(a.n, a.length);
            if a.n % 2 == 0 {
                k[a.n / 2] = 0.0;
            }
            let mut buf = data.to_vec();
            let mut fft = NdFft::new(&grid.shape());
            fft.forward(&mut buf);
            for (i, z) in buf.iter_mut().enumerate() {
                let kk = k[grid.unravel(i)[axis]];
                *z *= Complex64::new(0.0, kk);
            }
            fft.inverse(&mut buf);
            buf
        }
        DerivativeScheme::Central => {
            let a = grid.axes[axis];
            let h2 = 2.0 * a.spacing();
            let stride: usize = grid.axes[axis + 1..].iter().map(|a| a.n).product();
            (0..data.len())
                .map(|i| {
                    let j = grid.unravel(i)[axis];
                    let base = i - j * stride;
                    let plus = base + ((j + 1) % a.n) * stride;
                    let minus = base + ((j + a.n - 1) % a.n) * stride;
                    (data[plus] - data[minus]) / h2
                })
                .collect()
        }
    }
}

/// Real-valued convenience wrapper around [`derivative`].
pub fn derivative_real(grid: &Grid, data: &[f64], axis: usize, scheme: DerivativeScheme) -> Vec<f64> {
    let c: Vec<Complex64> = data.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    derivative(grid, &c, axis, scheme).into_iter().map(|z| z.re).collect()
}

/// Complex samples `ψ` on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    grid: Grid,
    samples: Vec<Complex64>,
}

impl WaveField {
    pub fn new(grid: Grid, samples: Vec<Complex64>) -> Result<Self, GridError> {
        if samples.len() != grid.len() {
            return Err(GridError::SampleCount {
                expected: grid.len(),
                actual: samples.len(),
            });
        }
        if let Some(i) = samples.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(GridError::NonFinite(i));
        }
        Ok(Self { grid, samples })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> Complex64) -> Result<Self, GridError> {
        let samples = grid.sample(f);
        Self::new(grid, samples)
    }

    pub fn zeros(grid: Grid) -> Self {
        let n = grid.len();
        Self {
            grid,
            samples: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// `|ψ|²` per sample.
    pub fn density(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `Σ |ψ|² dV`.
    pub fn norm(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell_volume()
    }

    /// Rescales so that [`WaveField::norm`] is 1.
    pub fn normalized(mut self) -> Result<Self, GridError> {
        let n = self.norm();
        if n == 0.0 {
            return Err(GridError::ZeroNorm);
        }
        let s = n.sqrt().recip();
        self.samples.iter_mut().for_each(|z| *z *= s);
        Ok(self)
    }

    pub fn conj(&self) -> Self {
        Self {
            grid: self.grid.clone(),
            samples: self.samples.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Multiplies every sample by `e^{iθ}`.
    pub fn rotated(&self, theta: f64) -> Self {
        let r = Complex64::from_polar(1.0, theta);
        Self {
            grid: self.grid.clone(),
            samples: self.samples.iter().map(|z| z * r).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn axis_geometry() {
        let a = Axis::span(-20.0, 20.0, 512);
        assert_eq!(a.spacing(), 40.0 / 512.0);
        assert_eq!(a.coord(0), -20.0);
        assert_eq!(a.coord(256), 0.0);
    }

    #[test]
    fn ravel_roundtrip() {
        let g = Grid::new(vec![Axis::span(0.0, 1.0, 3), Axis::span(0.0, 1.0, 4), Axis::span(0.0, 1.0, 5)]).unwrap();
        for i in 0..g.len() {
            let idx = g.unravel(i);
            assert_eq!(g.ravel(&idx[..3]), i);
        }
    }

    #[test]
    fn grid_validation() {
        assert_eq!(Grid::new(vec![]), Err(GridError::BadDimension(0)));
        assert!(Grid::new(vec![Axis::span(0.0, 1.0, 1)]).is_err());
        assert!(Grid::new(vec![Axis::span(1.0, 0.0, 8)]).is_err());
        assert!(Grid::new(vec![Axis::span(0.0, 1.0, 4); 4]).is_err());
    }

    #[test]
    fn spectral_derivative_of_sine_is_exact() {
        let g = Grid::line(0.0, 2.0 * PI, 32).unwrap();
        let f: Vec<Complex64> = g.sample(|x| Complex64::new((3.0 * x[0]).sin(), 0.0));
        let d = derivative(&g, &f, 0, DerivativeScheme::Spectral);
        for (i, z) in d.iter().enumerate() {
            let x = g.point(i)[0];
            assert!((z.re - 3.0 * (3.0 * x).cos()).abs() < 1e-12);
            assert!(z.im.abs() < 1e-12);
        }
    }

    #[test]
    fn central_derivative_along_second_axis() {
        let g = Grid::new(vec![Axis::span(0.0, 1.0, 4), Axis::span(0.0, 2.0 * PI, 64)]).unwrap();
        let f: Vec<Complex64> = g.sample(|p| Complex64::new(p[1].sin() * (1.0 + p[0]), 0.0));
        let d = derivative(&g, &f, 1, DerivativeScheme::Central);
        let h = g.axes()[1].spacing();
        for (i, z) in d.iter().enumerate() {
            let p = g.point(i);
            let want = (1.0 + p[0]) * p[1].cos() * h.sin() / h;
            assert!((z.re - want).abs() < 1e-12);
        }
    }

    #[test]
    fn field_norm_and_rotation() {
        let g = Grid::line(-1.0, 1.0, 4).unwrap();
        let f = WaveField::new(g.clone(), vec![Complex64::new(1.0, 1.0); 4]).unwrap();
        assert!((f.norm() - 4.0).abs() < 1e-15);
        let n = f.clone().normalized().unwrap();
        assert!((n.norm() - 1.0).abs() < 1e-15);
        assert!((f.rotated(0.3).norm() - f.norm()).abs() < 1e-14);
        assert!(matches!(WaveField::new(g.clone(), vec![Complex64::new(0.0, 0.0); 3]), Err(GridError::SampleCount { .. })));
        assert!(matches!(
            WaveField::new(g, vec![Complex64::new(f64::NAN, 0.0); 4]),
            Err(GridError::NonFinite(0))
        ));
    }
}
