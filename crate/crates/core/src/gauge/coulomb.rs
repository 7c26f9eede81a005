use rayon::prelude::*;

use super::greens::standard;
use super::{GaugeError, GreensSpec};
use crate::grid::WaveField;
use crate::sum::pairwise_sum;

pub const DEFAULT_COULOMB_CAP: usize = 16_384;

/// Non-local Coulomb term `−½ ΣΣ_{x≠x'} ρ(x) G(|x−x'|) ρ(x') dV²` with
/// `ρ = |ψ|²`.
///
/// Distances use the minimum periodic image; the singular diagonal is
/// dropped. Rows are summed in parallel, each with a fixed pairwise tree, so
/// the result is bit-identical for identical inputs.
pub fn coulomb_interaction(field: &WaveField, spec: &GreensSpec) -> Result<f64, GaugeError> {
    coulomb_interaction_capped(field, spec, DEFAULT_COULOMB_CAP)
}

pub fn coulomb_interaction_capped(field: &WaveField, spec: &GreensSpec, cap: usize) -> Result<f64, GaugeError> {
    if spec.n == 0 {
        return Err(GaugeError::ZeroDimension);
    }
    let grid = field.grid();
    let cells = grid.len();
    if cells > cap {
        return Err(GaugeError::CellCap { cells, cap });
    }
    let shape = grid.shape();
    let d = shape.len();
    let spacings: Vec<f64> = grid.axes().iter().map(|a| a.spacing()).collect();

    // Kernel indexed by per-axis offset (i' − i) mod n, flattened like the grid.
    let kernel: Vec<f64> = (0..cells)
        .map(|flat| {
            if flat == 0 {
                return 0.0;
            }
            let idx = grid.unravel(flat);
            let r2: f64 = (0..d)
                .map(|a| {
                    let o = idx[a].min(shape[a] - idx[a]) as f64 * spacings[a];
                    o * o
                })
                .sum();
            standard(spec.n, r2.sqrt())
        })
        .collect();

    let rho = field.density();
    let indices: Vec<[usize; 3]> = (0..cells).map(|f| grid.unravel(f)).collect();
    let strides: Vec<usize> = (0..d).map(|a| shape[a + 1..].iter().product()).collect();

    let rows: Vec<f64> = (0..cells)
        .into_par_iter()
        .map(|i| {
            if rho[i] == 0.0 {
                return 0.0;
            }
            let ii = indices[i];
            let terms: Vec<f64> = (0..cells)
                .map(|j| {
                    let jj = indices[j];
                    let mut off = 0;
                    for a in 0..d {
                        off += ((jj[a] + shape[a] - ii[a]) % shape[a]) * strides[a];
                    }
                    kernel[off] * rho[j]
                })
                .collect();
            rho[i] * pairwise_sum(&terms)
        })
        .collect();
    let dv = grid.cell_volume();
    Ok(-0.5 * spec.sign.factor() * pairwise_sum(&rows) * dv * dv)
}
