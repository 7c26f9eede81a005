//! Two-wave interference for plane-wave semantic states.

use num_complex::Complex64;
use thiserror::Error;

use crate::embedding::{cosine_similarity, EmbeddingError, EmbeddingVector};

/// Totals more negative than this are treated as an error rather than roundoff.
pub const NEGATIVE_TOTAL_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum InterferenceError {
    #[error("dimension mismatch: wave has {wave} components, point has {point}")]
    DimensionMismatch { wave: usize, point: usize },
    #[error("non-finite input")]
    NonFinite,
    #[error("negative intensity {0} beyond roundoff")]
    NegativeIntensity(f64),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

/// `ψ(t, x) = A e^{i(k·x − ωt)}`, with the phase at the origin carried by `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWave {
    pub amplitude: Complex64,
    pub wavevector: Vec<f64>,
    pub omega: f64,
}

impl PlaneWave {
    pub fn new(magnitude: f64, phase: f64, wavevector: Vec<f64>, omega: f64) -> Self {
        Self {
            amplitude: Complex64::from_polar(magnitude, phase),
            wavevector,
            omega,
        }
    }

    /// Total phase `arg A + k·x − ωt` at `(t, x)`.
    pub fn phase_at(&self, x: &[f64], t: f64) -> Result<f64, InterferenceError> {
        if self.wavevector.len() != x.len() {
            return Err(InterferenceError::DimensionMismatch {
                wave: self.wavevector.len(),
                point: x.len(),
            });
        }
        let kx: f64 = self.wavevector.iter().zip(x).map(|(k, x)| k * x).sum();
        Ok(self.amplitude.arg() + kx - self.omega * t)
    }

    pub fn eval(&self, x: &[f64], t: f64) -> Result<Complex64, InterferenceError> {
        Ok(Complex64::from_polar(self.amplitude.norm(), self.phase_at(x, t)?))
    }
}

/// Intensity with its direct and cross-term decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceResult {
    pub total: f64,
    pub direct_terms: (f64, f64),
    pub interference_term: f64,
}

impl InterferenceResult {
    /// Builds the result from `|A1|`, `|A2|` and the phase difference `φ1 − φ2`.
    fn from_parts(a1: f64, a2: f64, phase_difference: f64) -> Result<Self, InterferenceError> {
        let d1 = a1 * a1;
        let d2 = a2 * a2;
        let cross = 2.0 * a1 * a2 * phase_difference.cos();
        let mut total = d1 + d2 + cross;
        if !total.is_finite() {
            return Err(InterferenceError::NonFinite);
        }
        if total < 0.0 {
            if total < -NEGATIVE_TOTAL_TOL {
                return Err(InterferenceError::NegativeIntensity(total));
            }
            log::warn!("clamping roundoff-negative intensity {total:e} to 0");
            total = 0.0;
        }
        Ok(Self {
            total,
            direct_terms: (d1, d2),
            interference_term: cross,
        })
    }
}

/// `|ψ1 + ψ2|² = |ψ1|² + |ψ2|² + 2|ψ1||ψ2| cos(φ1 − φ2)` at `(t, x)`.
pub fn two_wave_intensity(w1: &PlaneWave, w2: &PlaneWave, x: &[f64], t: f64) -> Result<InterferenceResult, InterferenceError> {
    let p1 = w1.phase_at(x, t)?;
    let p2 = w2.phase_at(x, t)?;
    InterferenceResult::from_parts(w1.amplitude.norm(), w2.amplitude.norm(), p1 - p2)
}

/// Intensity of two plane waves built from embeddings with `k = α v`,
/// `φ1 = 0` and `φ2 = β arccos(S_C(v1, v2))`:
///
/// `P = A1² + A2² + 2 A1 A2 cos(−β arccos(S_C) + α (v1 − v2)·x)`.
pub fn embedding_interference(
    v1: &EmbeddingVector,
    v2: &EmbeddingVector,
    a1: f64,
    a2: f64,
    alpha: f64,
    beta: f64,
    x: &[f64],
) -> Result<InterferenceResult, InterferenceError> {
    if v1.dim() != x.len() {
        return Err(InterferenceError::DimensionMismatch {
            wave: v1.dim(),
            point: x.len(),
        });
    }
    let theta = cosine_similarity(v1, v2)?.acos();
    let spatial: f64 = v1
        .values()
        .iter()
        .zip(v2.values())
        .zip(x)
        .map(|((p, q), x)| (p - q) * x)
        .sum();
    InterferenceResult::from_parts(a1.abs(), a2.abs(), -beta * theta + alpha * spatial)
}
