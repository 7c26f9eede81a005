//! Multi-dimensional FFT over row-major complex buffers.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub(crate) struct NdFft {
    shape: Vec<usize>,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
    line: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl NdFft {
    pub(crate) fn new(shape: &[usize]) -> Self {
        let mut planner = FftPlanner::new();
        let forward: Vec<_> = shape.iter().map(|&n| planner.plan_fft_forward(n)).collect();
        let inverse: Vec<_> = shape.iter().map(|&n| planner.plan_fft_inverse(n)).collect();
        let scratch_len = forward
            .iter()
            .chain(&inverse)
            .map(|p| p.get_inplace_scratch_len())
            .max()
            .unwrap_or(0);
        let longest = shape.iter().copied().max().unwrap_or(0);
        Self {
            shape: shape.to_vec(),
            forward,
            inverse,
            line: vec![Complex64::new(0.0, 0.0); longest],
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
        }
    }

    /// Unnormalized forward transform.
    pub(crate) fn forward(&mut self, data: &mut [Complex64]) {
        for axis in 0..self.shape.len() {
            let plan = self.forward[axis].clone();
            self.transform_axis(data, axis, plan.as_ref());
        }
    }

    /// Inverse transform including the `1/N` factor.
    pub(crate) fn inverse(&mut self, data: &mut [Complex64]) {
        for axis in 0..self.shape.len() {
            let plan = self.inverse[axis].clone();
            self.transform_axis(data, axis, plan.as_ref());
        }
        let scale = 1.0 / data.len() as f64;
        data.iter_mut().for_each(|z| *z *= scale);
    }

    fn transform_axis(&mut self, data: &mut [Complex64], axis: usize, plan: &dyn Fft<f64>) {
        let n = self.shape[axis];
        let stride: usize = self.shape[axis + 1..].iter().product();
        if stride == 1 {
            for chunk in data.chunks_exact_mut(n) {
                plan.process_with_scratch(chunk, &mut self.scratch);
            }
            return;
        }
        let block = n * stride;
        let line = &mut self.line[..n];
        for outer in (0..data.len()).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + j * stride];
                }
                plan.process_with_scratch(line, &mut self.scratch);
                for (j, v) in line.iter().enumerate() {
                    data[base + j * stride] = *v;
                }
            }
        }
    }
}

/// Angular wavenumbers in FFT order for `n` points over a period `length`.
/// The Nyquist mode of an even grid maps to `-n/2`.
pub(crate) fn wavenumbers(n: usize, length: f64) -> Vec<f64> {
    let base = TAU / length;
    (0..n)
        .map(|j| {
            let m = if j < n.div_ceil(2) { j as i64 } else { j as i64 - n as i64 };
            base * m as f64
        })
        .collect()
}
