//! Lowest eigenpairs of the periodic finite-difference Hamiltonian
//! `H = −½ D₂ + diag(V)`, where `D₂ f_j = (f_{j+1} − 2 f_j + f_{j−1}) / h²`.
//!
//! Block inverse iteration with a fixed shift below `min V`, so `H − σ` is
//! symmetric positive definite and each solve is a cyclic tridiagonal
//! system (Thomas algorithm plus a Sherman-Morrison corner correction).
//! A Rayleigh-Ritz step on the block after every iteration resolves
//! (near-)degenerate pairs.

use nalgebra::{DMatrix, SymmetricEigen};

use super::WaveError;
use crate::grid::Grid;
use crate::rng::SplitMix64;

const EXTRA_VECTORS: usize = 4;
const MAX_ITERATIONS: usize = 20_000;
const SHIFT_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryState {
    pub energy: f64,
    /// Normalized so that `Σ φ_j² h = 1`; the largest-magnitude entry is positive.
    pub vector: Vec<f64>,
}

struct CyclicSolver {
    n: usize,
    diag: Vec<f64>,
    off: f64,
    // Factorization of the modified tridiagonal matrix.
    c_prime: Vec<f64>,
    denom: Vec<f64>,
    gamma: f64,
    z: Vec<f64>,
    u_last: f64,
}

impl CyclicSolver {
    /// Matrix with `diag` on the diagonal and `off` on both off-diagonals and
    /// both periodic corners.
    fn new(diag: Vec<f64>, off: f64) -> Self {
        let n = diag.len();
        let gamma = -diag[0];
        let mut s = Self {
            n,
            diag,
            off,
            c_prime: vec![0.0; n],
            denom: vec![0.0; n],
            gamma,
            z: vec![0.0; n],
            u_last: 0.0,
        };
        let mut b = s.diag.clone();
        b[0] -= gamma;
        b[n - 1] -= off * off / gamma;
        s.denom[0] = b[0];
        s.c_prime[0] = off / b[0];
        for i in 1..n {
            s.denom[i] = b[i] - off * s.c_prime[i - 1];
            s.c_prime[i] = off / s.denom[i];
        }
        let mut u = vec![0.0; n];
        u[0] = gamma;
        u[n - 1] = off;
        s.u_last = off;
        s.z = s.tridiagonal(&u);
        s
    }

    fn tridiagonal(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0; n];
        y[0] = rhs[0] / self.denom[0];
        for i in 1..n {
            y[i] = (rhs[i] - self.off * y[i - 1]) / self.denom[i];
        }
        for i in (0..n - 1).rev() {
            y[i] -= self.c_prime[i] * y[i + 1];
        }
        y
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let y = self.tridiagonal(rhs);
        // v = (1, 0, ..., 0, off/gamma)
        let v_last = self.off / self.gamma;
        let vy = y[0] + v_last * y[n - 1];
        let vz = self.z[0] + v_last * self.z[n - 1];
        let factor = vy / (1.0 + vz);
        let _ = self.u_last;
        y.iter().zip(&self.z).map(|(yi, zi)| yi - factor * zi).collect()
    }
}

fn apply_h(potential: &[f64], h2: f64, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|j| {
            let l = x[(j + n - 1) % n];
            let r = x[(j + 1) % n];
            -0.5 * (l - 2.0 * x[j] + r) / h2 + potential[j] * x[j]
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn orthonormalize(block: &mut [Vec<f64>]) {
    for i in 0..block.len() {
        for _ in 0..2 {
            for j in 0..i {
                let p = dot(&block[i], &block[j]);
                let (head, tail) = block.split_at_mut(i);
                tail[0].iter_mut().zip(&head[j]).for_each(|(x, y)| *x -= p * y);
            }
        }
        let n = dot(&block[i], &block[i]).sqrt();
        block[i].iter_mut().for_each(|x| *x /= n);
    }
}

/// Lowest `k` eigenpairs on a 1D periodic grid, energies ascending.
pub fn stationary_states(grid: &Grid, potential: &[f64], k: usize) -> Result<Vec<StationaryState>, WaveError> {
    if grid.ndim() != 1 {
        return Err(WaveError::NotOneDimensional(grid.ndim()));
    }
    let n = grid.len();
    if potential.len() != n {
        return Err(WaveError::PotentialMismatch {
            expected: n,
            actual: potential.len(),
        });
    }
    let block_size = k + EXTRA_VECTORS;
    if k == 0 || 2 * block_size > n {
        return Err(WaveError::KOutOfRange { k, n });
    }
    if potential.iter().any(|v| !v.is_finite()) {
        return Err(WaveError::Config("potential contains non-finite values".into()));
    }

    let h = grid.axes()[0].spacing();
    let h2 = h * h;
    let v_min = potential.iter().copied().fold(f64::INFINITY, f64::min);
    let shift = v_min - SHIFT_MARGIN;
    let solver = CyclicSolver::new(potential.iter().map(|v| v + 1.0 / h2 - shift).collect(), -0.5 / h2);

    let mut rng = SplitMix64::new(0x5EED);
    let mut block: Vec<Vec<f64>> = (0..block_size)
        .map(|_| (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect())
        .collect();
    orthonormalize(&mut block);

    let scale = potential.iter().fold(1.0 / h2, |m, v| m.max(v.abs()));
    let tol = 1e-11 * scale;
    let mut residual = f64::INFINITY;
    let mut ritz = vec![0.0; block_size];
    for _ in 0..MAX_ITERATIONS {
        let hx: Vec<Vec<f64>> = block.iter().map(|x| apply_h(potential, h2, x)).collect();
        let small = DMatrix::from_fn(block_size, block_size, |i, j| dot(&block[i], &hx[j]));
        let small = (&small + small.transpose()) * 0.5;
        let eig = SymmetricEigen::new(small);
        let mut order: Vec<usize> = (0..block_size).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

        let rotate = |src: &[Vec<f64>]| -> Vec<Vec<f64>> {
            order
                .iter()
                .map(|&c| {
                    let mut out = vec![0.0; n];
                    for (r, v) in src.iter().enumerate() {
                        let q = eig.eigenvectors[(r, c)];
                        out.iter_mut().zip(v).for_each(|(o, x)| *o += q * x);
                    }
                    out
                })
                .collect()
        };
        block = rotate(&block);
        let hx = rotate(&hx);
        for (slot, &c) in ritz.iter_mut().zip(&order) {
            *slot = eig.eigenvalues[c];
        }

        residual = (0..k)
            .map(|i| {
                hx[i]
                    .iter()
                    .zip(&block[i])
                    .map(|(a, b)| (a - ritz[i] * b).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if residual < tol {
            return Ok(finish(block, &ritz, k, h));
        }

        block = block.iter().map(|x| solver.solve(x)).collect();
        orthonormalize(&mut block);
    }
    Err(WaveError::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual,
    })
}

fn finish(block: Vec<Vec<f64>>, ritz: &[f64], k: usize, h: f64) -> Vec<StationaryState> {
    block
        .into_iter()
        .zip(ritz)
        .take(k)
        .map(|(mut v, &energy)| {
            let pivot = v.iter().copied().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap_or(1.0);
            let s = pivot.signum() / h.sqrt();
            v.iter_mut().for_each(|x| *x *= s);
            StationaryState { energy, vector: v }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_solver_inverts_matrix() {
        let n = 9;
        let diag: Vec<f64> = (0..n).map(|i| 3.0 + i as f64 * 0.1).collect();
        let off = -0.7;
        let s = CyclicSolver::new(diag.clone(), off);
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let x = s.solve(&rhs);
        for j in 0..n {
            let ax = diag[j] * x[j] + off * (x[(j + 1) % n] + x[(j + n - 1) % n]);
            assert!((ax - rhs[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn free_ground_state_is_uniform() {
        let grid = Grid::line(-10.0, 10.0, 128).unwrap();
        let v = vec![0.0; 128];
        let s = stationary_states(&grid, &v, 1).unwrap();
        assert!(s[0].energy.abs() < 1e-8);
        let h = grid.axes()[0].spacing();
        let want = 1.0 / (128.0 * h).sqrt();
        assert!(s[0].vector.iter().all(|x| (x - want).abs() < 1e-8));
    }

    #[test]
    fn free_spectrum_matches_discrete_dispersion() {
        // Periodic FD eigenvalues: (1 − cos(2πm/n)) / h², doubly degenerate for m ≥ 1.
        let n = 64;
        let grid = Grid::line(0.0, 8.0, n).unwrap();
        let h = grid.axes()[0].spacing();
        let s = stationary_states(&grid, &vec![0.0; n], 5).unwrap();
        let e = |m: f64| (1.0 - (std::f64::consts::TAU * m / n as f64).cos()) / (h * h);
        let want = [0.0, e(1.0), e(1.0), e(2.0), e(2.0)];
        for (st, w) in s.iter().zip(want) {
            assert!((st.energy - w).abs() < 1e-9, "{} vs {}", st.energy, w);
        }
    }

    #[test]
    fn eigenvectors_are_orthonormal() {
        let grid = Grid::line(-5.0, 5.0, 200).unwrap();
        let v = grid.sample(|x| 0.5 * x[0] * x[0]);
        let s = stationary_states(&grid, &v, 3).unwrap();
        let h = grid.axes()[0].spacing();
        for i in 0..3 {
            for j in 0..3 {
                let d = dot(&s[i].vector, &s[j].vector) * h;
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rejects_bad_k() {
        let grid = Grid::line(0.0, 1.0, 16).unwrap();
        assert!(matches!(stationary_states(&grid, &[0.0; 16], 0), Err(WaveError::KOutOfRange { .. })));
        assert!(matches!(stationary_states(&grid, &[0.0; 16], 10), Err(WaveError::KOutOfRange { .. })));
        let sq = Grid::square(0.0, 1.0, 8).unwrap();
        assert!(matches!(stationary_states(&sq, &[0.0; 64], 1), Err(WaveError::NotOneDimensional(2))));
    }
}
