use num_complex::Complex64;

use super::{GaugeError, GreensSpec};
use crate::fft::NdFft;
use crate::grid::Grid;

/// Solve `−∇²A₀ = ρ` on a periodic grid by Fourier division.
///
/// The zero mode is set to zero, which fixes the additive constant by
/// requiring a zero spatial mean; equivalently the charge is neutralized by
/// a uniform background. The spectral Laplacian `|k|²` is used, so the
/// result equals the periodic convolution of `ρ − ρ̄` with `G`.
/// [`super::GreensSign::Negated`] negates the solution.
pub fn solve_scalar_potential(grid: &Grid, density: &[f64], spec: &GreensSpec) -> Result<Vec<f64>, GaugeError> {
    if spec.n != grid.ndim() {
        return Err(GaugeError::DimensionMismatch {
            spec: spec.n,
            grid: grid.ndim(),
        });
    }
    if density.len() != grid.len() {
        return Err(GaugeError::Length {
            what: "density",
            expected: grid.len(),
            actual: density.len(),
        });
    }
    if let Some(i) = density.iter().position(|x| !x.is_finite()) {
        return Err(GaugeError::NonFinite(i));
    }
    if let Some(i) = density.iter().position(|x| *x < 0.0) {
        return Err(GaugeError::NegativeDensity(i));
    }
    let mut buf: Vec<Complex64> = density.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut fft = NdFft::new(&grid.shape());
    fft.forward(&mut buf);
    let sign = spec.sign.factor();
    for (z, k2) in buf.iter_mut().zip(grid.k_squared()) {
        *z = if k2 == 0.0 { Complex64::new(0.0, 0.0) } else { *z * (sign / k2) };
    }
    fft.inverse(&mut buf);
    Ok(buf.into_iter().map(|z| z.re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{derivative_real, DerivativeScheme};

    #[test]
    fn zero_density_gives_zero_field() {
        let g = Grid::square(-1.0, 1.0, 16).unwrap();
        let a = solve_scalar_potential(&g, &vec![0.0; 256], &GreensSpec::new(2).unwrap()).unwrap();
        assert!(a.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn recovers_single_mode() {
        // ρ = 1 + cos(2πx/L) ⇒ A₀ = cos(2πx/L) (L/2π)².
        let l = 3.0;
        let g = Grid::line(0.0, l, 32).unwrap();
        let k = std::f64::consts::TAU / l;
        let rho = g.sample(|x| 1.0 + (k * x[0]).cos());
        let a = solve_scalar_potential(&g, &rho, &GreensSpec::new(1).unwrap()).unwrap();
        for (i, v) in a.iter().enumerate() {
            let want = (k * g.point(i)[0]).cos() / (k * k);
            assert!((v - want).abs() < 1e-12);
        }
        let neg = solve_scalar_potential(&g, &rho, &GreensSpec::new(1).unwrap().negated()).unwrap();
        assert!(a.iter().zip(&neg).all(|(x, y)| x == &-y));
    }

    #[test]
    fn satisfies_poisson_equation_up_to_mean() {
        let g = Grid::square(-4.0, 4.0, 32).unwrap();
        let rho = g.sample(|x| (-(x[0] * x[0] + x[1] * x[1])).exp());
        let a = solve_scalar_potential(&g, &rho, &GreensSpec::new(2).unwrap()).unwrap();
        let mean = rho.iter().sum::<f64>() / rho.len() as f64;
        let s = DerivativeScheme::Spectral;
        let mut lap = vec![0.0; a.len()];
        for axis in 0..2 {
            let d = derivative_real(&g, &derivative_real(&g, &a, axis, s), axis, s);
            lap.iter_mut().zip(d).for_each(|(l, v)| *l += v);
        }
        for (l, r) in lap.iter().zip(&rho) {
            assert!((-l - (r - mean)).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_bad_density() {
        let g = Grid::line(0.0, 1.0, 4).unwrap();
        let s = GreensSpec::new(1).unwrap();
        assert!(matches!(solve_scalar_potential(&g, &[0.0, -1.0, 0.0, 0.0], &s), Err(GaugeError::NegativeDensity(1))));
        assert!(matches!(solve_scalar_potential(&g, &[0.0, f64::NAN, 0.0, 0.0], &s), Err(GaugeError::NonFinite(1))));
        assert!(matches!(solve_scalar_potential(&g, &[0.0; 3], &s), Err(GaugeError::Length { .. })));
        assert!(matches!(
            solve_scalar_potential(&g, &[0.0; 4], &GreensSpec::new(3).unwrap()),
            Err(GaugeError::DimensionMismatch { .. })
        ));
    }
}
