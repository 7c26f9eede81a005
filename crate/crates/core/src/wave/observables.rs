use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ObservableSeries, WaveError};
use crate::grid::{Grid, WaveField};

/// Fraction of `|ψ|²` on either side of `split` for a 1D field.
///
/// Grid points lying on the split itself contribute half their weight to
/// each side, so a mirror-symmetric density splits exactly 50/50.
pub fn well_occupancy(field: &WaveField, split: f64) -> Result<(f64, f64), WaveError> {
    occupancy_of(field.grid(), field.samples(), split)
}

pub(crate) fn occupancy_of(grid: &Grid, psi: &[Complex64], split: f64) -> Result<(f64, f64), WaveError> {
    if grid.ndim() != 1 {
        return Err(WaveError::NotOneDimensional(grid.ndim()));
    }
    let axis = &grid.axes()[0];
    let eps = 1e-9 * axis.spacing();
    let (mut left, mut right) = (0.0, 0.0);
    for (j, z) in psi.iter().enumerate() {
        let x = axis.coord(j);
        let w = z.norm_sqr();
        if (x - split).abs() <= eps {
            left += 0.5 * w;
            right += 0.5 * w;
        } else if x < split {
            left += w;
        } else {
            right += w;
        }
    }
    let total = left + right;
    if total <= 0.0 {
        return Err(WaveError::Grid(crate::grid::GridError::ZeroNorm));
    }
    Ok((left / total, right / total))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChargeVerdict {
    Conserved,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargeReport {
    pub max_relative_drift: f64,
    /// `|N(t) − N(0)| / N(0)` per recorded entry.
    pub drift: Vec<f64>,
    pub verdict: ChargeVerdict,
    /// Index of the first entry whose drift reaches `tolerance`.
    pub first_violation: Option<usize>,
    pub tolerance: f64,
}

/// Relative drift of the recorded norm against its initial value.
pub fn charge_conservation_report(series: &ObservableSeries, tolerance: f64) -> Result<ChargeReport, WaveError> {
    let n0 = *series.norm.first().ok_or(WaveError::EmptySeries)?;
    if !(tolerance > 0.0) {
        return Err(WaveError::Config(format!("tolerance must be positive, got {tolerance}")));
    }
    if !(n0 > 0.0) {
        return Err(WaveError::Grid(crate::grid::GridError::ZeroNorm));
    }
    let drift: Vec<f64> = series.norm.iter().map(|n| (n - n0).abs() / n0).collect();
    let max_relative_drift = drift.iter().copied().fold(0.0, f64::max);
    let first_violation = drift.iter().position(|d| *d >= tolerance);
    Ok(ChargeReport {
        max_relative_drift,
        verdict: if first_violation.is_none() {
            ChargeVerdict::Conserved
        } else {
            ChargeVerdict::Violated
        },
        first_violation,
        drift,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(norm: Vec<f64>) -> ObservableSeries {
        ObservableSeries {
            times: (0..norm.len()).map(|i| i as f64).collect(),
            energy: vec![0.0; norm.len()],
            mean_position: vec![vec![0.0; norm.len()]],
            well_occupancy: None,
            norm,
        }
    }

    #[test]
    fn symmetric_density_splits_evenly() {
        // Odd point count centred on zero puts a sample exactly on the split.
        let grid = Grid::new(vec![crate::grid::Axis::new(-5.0, 10.0, 101)]).unwrap();
        let f = WaveField::from_fn(grid, |x| Complex64::new((-(x[0] - 0.0).powi(2)).exp(), 0.0)).unwrap();
        let (l, r) = well_occupancy(&f, 0.0).unwrap();
        assert!((l - 0.5).abs() < 1e-14 && (r - 0.5).abs() < 1e-14);
    }

    #[test]
    fn localized_density_is_one_sided() {
        let grid = Grid::line(-10.0, 10.0, 256).unwrap();
        let f = WaveField::from_fn(grid, |x| Complex64::new((-(x[0] + 5.0).powi(2)).exp(), 0.0)).unwrap();
        let (l, r) = well_occupancy(&f, 0.0).unwrap();
        assert!(l > 0.999999 && (l + r - 1.0).abs() < 1e-14);
    }

    #[test]
    fn occupancy_needs_1d() {
        let f = WaveField::from_fn(Grid::square(0.0, 1.0, 4).unwrap(), |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(well_occupancy(&f, 0.5), Err(WaveError::NotOneDimensional(2))));
    }

    #[test]
    fn conserved_and_violated_verdicts() {
        let ok = charge_conservation_report(&series(vec![1.0, 1.0 + 1e-12, 1.0 - 5e-11]), 1e-10).unwrap();
        assert_eq!(ok.verdict, ChargeVerdict::Conserved);
        assert!((ok.max_relative_drift - 5e-11).abs() < 1e-15);

        let bad = charge_conservation_report(&series(vec![2.0, 2.0, 2.1, 2.0]), 1e-3).unwrap();
        assert_eq!(bad.verdict, ChargeVerdict::Violated);
        assert_eq!(bad.first_violation, Some(2));
    }

    #[test]
    fn empty_series_is_an_error() {
        assert!(matches!(charge_conservation_report(&series(vec![]), 1e-6), Err(WaveError::EmptySeries)));
    }
}
