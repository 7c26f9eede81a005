//! Complex semantic states over a token basis.
//!
//! A [`SemanticState`] stores one [`ComplexAmplitude`] per basis label in
//! magnitude/phase form. Rectangular form is only used transiently where
//! addition is needed ([`perturb`]).

use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{cosine_similarity, EmbeddingError, EmbeddingSet};

/// Tolerance on `Σ|c_i|² = 1` for a state to count as normalized.
pub const NORMALIZED_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("amplitude magnitude must be finite and nonnegative, got {0}")]
    BadMagnitude(f64),
    #[error("amplitude phase must be finite, got {0}")]
    BadPhase(f64),
    #[error("basis has {labels} labels but {coeffs} coefficients")]
    LengthMismatch { labels: usize, coeffs: usize },
    #[error("basis is empty")]
    EmptyBasis,
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("state has no nonzero coefficient")]
    ZeroState,
    #[error("state is not normalized (sum of squared magnitudes = {0})")]
    NotNormalized(f64),
    #[error("bases differ")]
    BasisMismatch,
    #[error("no eigenvalue supplied for label {0:?}")]
    MissingEigenvalue(String),
    #[error("label {0:?} is not in the basis")]
    UnknownLabel(String),
    #[error("measurement record total must be at least 1")]
    EmptyRecord,
    #[error("measurement record total {total} does not equal the sum of counts {sum}")]
    TotalMismatch { total: u64, sum: u64 },
    #[error("all clipped similarities are <= 0")]
    AllClippedToZero,
    #[error("softmax temperature must be positive and finite, got {0}")]
    BadTemperature(f64),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

fn canonical_phase(phase: f64) -> f64 {
    let p = phase.rem_euclid(TAU);
    if p >= TAU {
        0.0
    } else {
        p
    }
}

/// `|c| e^{iφ}` with `|c| ≥ 0` and `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexAmplitude {
    magnitude: f64,
    phase: f64,
}

impl ComplexAmplitude {
    pub const ONE: Self = Self {
        magnitude: 1.0,
        phase: 0.0,
    };

    pub fn new(magnitude: f64, phase: f64) -> Result<Self, StateError> {
        if !(magnitude.is_finite() && magnitude >= 0.0) {
            return Err(StateError::BadMagnitude(magnitude));
        }
        if !phase.is_finite() {
            return Err(StateError::BadPhase(phase));
        }
        Ok(Self {
            magnitude,
            phase: canonical_phase(phase),
        })
    }

    pub fn from_complex(z: Complex64) -> Self {
        let magnitude = z.norm();
        let phase = if magnitude == 0.0 { 0.0 } else { canonical_phase(z.arg()) };
        Self { magnitude, phase }
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.magnitude, self.phase)
    }

    /// Complex product: magnitudes multiply, phases add mod 2π.
    pub fn mul(&self, other: &Self) -> Self {
        Self {
            magnitude: self.magnitude * other.magnitude,
            phase: canonical_phase(self.phase + other.phase),
        }
    }
}

/// `|α⟩ = Σ_i c_i |ψ_i⟩` over an ordered token basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateWire", into = "StateWire")]
pub struct SemanticState {
    basis: Vec<String>,
    coeffs: Vec<ComplexAmplitude>,
    normalized: bool,
}

/// JSON form: `{basis: [..], coeffs: [[magnitude, phase], ..], normalized}`.
#[derive(Serialize, Deserialize)]
struct StateWire {
    basis: Vec<String>,
    coeffs: Vec<[f64; 2]>,
    normalized: bool,
}

impl TryFrom<StateWire> for SemanticState {
    type Error = StateError;

    fn try_from(w: StateWire) -> Result<Self, Self::Error> {
        let coeffs = w
            .coeffs
            .iter()
            .map(|[m, p]| ComplexAmplitude::new(*m, *p))
            .collect::<Result<Vec<_>, _>>()?;
        let state = SemanticState::new(w.basis, coeffs)?;
        if w.normalized && !state.normalized {
            return Err(StateError::NotNormalized(state.norm_squared()));
        }
        Ok(state)
    }
}

impl From<SemanticState> for StateWire {
    fn from(s: SemanticState) -> Self {
        Self {
            coeffs: s.coeffs.iter().map(|c| [c.magnitude, c.phase]).collect(),
            basis: s.basis,
            normalized: s.normalized,
        }
    }
}

impl SemanticState {
    /// The normalized flag is derived from the coefficients.
    pub fn new(basis: Vec<String>, coeffs: Vec<ComplexAmplitude>) -> Result<Self, StateError> {
        if basis.len() != coeffs.len() {
            return Err(StateError::LengthMismatch {
                labels: basis.len(),
                coeffs: coeffs.len(),
            });
        }
        if basis.is_empty() {
            return Err(StateError::EmptyBasis);
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = basis.iter().find(|b| !seen.insert(b.as_str())) {
            return Err(StateError::DuplicateLabel(dup.clone()));
        }
        let mut s = Self {
            basis,
            coeffs,
            normalized: false,
        };
        s.refresh_flag();
        Ok(s)
    }

    /// Convenience constructor from `(label, magnitude, phase)` triples.
    pub fn from_polar<'a, I>(entries: I) -> Result<Self, StateError>
    where
        I: IntoIterator<Item = (&'a str, f64, f64)>,
    {
        let (basis, coeffs): (Vec<String>, Vec<Result<ComplexAmplitude, StateError>>) = entries
            .into_iter()
            .map(|(l, m, p)| (l.to_string(), ComplexAmplitude::new(m, p)))
            .unzip();
        Self::new(basis, coeffs.into_iter().collect::<Result<_, _>>()?)
    }

    fn refresh_flag(&mut self) {
        self.normalized = (self.norm_squared() - 1.0).abs() <= NORMALIZED_TOL;
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn coeffs(&self) -> &[ComplexAmplitude] {
        &self.coeffs
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_squared(&self) -> f64 {
        self.coeffs.iter().map(|c| c.magnitude * c.magnitude).sum()
    }

    pub fn coeff(&self, label: &str) -> Option<ComplexAmplitude> {
        self.basis.iter().position(|b| b == label).map(|i| self.coeffs[i])
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}

/// Rule turning cosine similarities into (pre-normalization) magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum MagnitudeRule {
    /// `w_i = exp(s_i/τ) / Σ_j exp(s_j/τ)`
    Softmax { tau: f64 },
    /// `w_i = max(s_i, 0)`
    ClippedCosine,
}

impl Default for MagnitudeRule {
    fn default() -> Self {
        Self::Softmax { tau: 1.0 }
    }
}

/// Complexifies `target` over `basis`: phase `β·arccos(S_C)` per basis token and
/// magnitudes from `rule`, L2-normalized.
pub fn complexify(
    target: &str,
    basis: &[String],
    set: &EmbeddingSet,
    beta: f64,
    rule: MagnitudeRule,
) -> Result<SemanticState, StateError> {
    if basis.is_empty() {
        return Err(StateError::EmptyBasis);
    }
    let t = set.require(target)?;
    let sims = basis
        .iter()
        .map(|b| cosine_similarity(t, set.require(b)?))
        .collect::<Result<Vec<f64>, EmbeddingError>>()?;

    let weights: Vec<f64> = match rule {
        MagnitudeRule::Softmax { tau } => {
            if !(tau.is_finite() && tau > 0.0) {
                return Err(StateError::BadTemperature(tau));
            }
            let max = sims.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let e: Vec<f64> = sims.iter().map(|s| ((s - max) / tau).exp()).collect();
            let z: f64 = e.iter().sum();
            e.into_iter().map(|x| x / z).collect()
        }
        MagnitudeRule::ClippedCosine => {
            let w: Vec<f64> = sims.iter().map(|s| s.max(0.0)).collect();
            if w.iter().all(|&x| x == 0.0) {
                return Err(StateError::AllClippedToZero);
            }
            w
        }
    };
    let l2 = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
    let coeffs = weights
        .iter()
        .zip(&sims)
        .map(|(w, s)| ComplexAmplitude::new(w / l2, beta * s.clamp(-1.0, 1.0).acos()))
        .collect::<Result<Vec<_>, _>>()?;
    let mut state = SemanticState::new(basis.to_vec(), coeffs)?;
    state.normalized = true;
    Ok(state)
}

/// Rescales magnitudes so `Σ|c_i|² = 1`; phases are untouched.
pub fn normalize(state: &SemanticState) -> Result<SemanticState, StateError> {
    let n2 = state.norm_squared();
    if n2 == 0.0 {
        return Err(StateError::ZeroState);
    }
    if (n2 - 1.0).abs() <= 4.0 * f64::EPSILON {
        let mut out = state.clone();
        out.normalized = true;
        return Ok(out);
    }
    let scale = n2.sqrt().recip();
    let coeffs = state
        .coeffs
        .iter()
        .map(|c| ComplexAmplitude {
            magnitude: c.magnitude * scale,
            phase: c.phase,
        })
        .collect();
    Ok(SemanticState {
        basis: state.basis.clone(),
        coeffs,
        normalized: true,
    })
}

/// `p_i = |c_i|²` for a normalized state, in basis order.
pub fn measure_probabilities(state: &SemanticState) -> Result<Vec<(String, f64)>, StateError> {
    let n2 = state.norm_squared();
    if (n2 - 1.0).abs() > NORMALIZED_TOL {
        return Err(StateError::NotNormalized(n2));
    }
    Ok(state
        .basis
        .iter()
        .zip(&state.coeffs)
        .map(|(l, c)| (l.clone(), c.magnitude * c.magnitude))
        .collect())
}

/// Outcome tallies from repeated sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    counts: Vec<(String, u64)>,
    total: u64,
}

impl MeasurementRecord {
    pub fn new<I, S>(counts: I) -> Result<Self, StateError>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let counts: Vec<(String, u64)> = counts.into_iter().map(|(l, c)| (l.into(), c)).collect();
        let total = counts.iter().map(|(_, c)| c).sum();
        Self::with_total(counts, total)
    }

    pub fn with_total(counts: Vec<(String, u64)>, total: u64) -> Result<Self, StateError> {
        let sum: u64 = counts.iter().map(|(_, c)| c).sum();
        if total != sum {
            return Err(StateError::TotalMismatch { total, sum });
        }
        if total == 0 {
            return Err(StateError::EmptyRecord);
        }
        Ok(Self { counts, total })
    }

    pub fn counts(&self) -> &[(String, u64)] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Observed frequencies `count / total`, each correctly rounded.
    pub fn probabilities(&self) -> Vec<(String, f64)> {
        let total = self.total as f64;
        self.counts.iter().map(|(l, c)| (l.clone(), *c as f64 / total)).collect()
    }
}

/// `|c_i| = sqrt(count_i / total)`. Frequencies carry no phase information,
/// so every phase is set to 0.
pub fn estimate_amplitudes(record: &MeasurementRecord) -> Result<SemanticState, StateError> {
    if record.total == 0 {
        return Err(StateError::EmptyRecord);
    }
    let total = record.total as f64;
    let (basis, coeffs) = record
        .counts
        .iter()
        .map(|(l, c)| {
            (
                l.clone(),
                ComplexAmplitude {
                    magnitude: (*c as f64 / total).sqrt(),
                    phase: 0.0,
                },
            )
        })
        .unzip();
    let mut state = SemanticState::new(basis, coeffs)?;
    state.normalized = true;
    Ok(state)
}

/// `c_i ← c_i · A_i`. The result is not renormalized.
pub fn apply_semantic_operator(
    state: &SemanticState,
    eigenvalues: &HashMap<String, ComplexAmplitude>,
) -> Result<SemanticState, StateError> {
    let coeffs = state
        .basis
        .iter()
        .zip(&state.coeffs)
        .map(|(l, c)| {
            eigenvalues
                .get(l)
                .map(|a| c.mul(a))
                .ok_or_else(|| StateError::MissingEigenvalue(l.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = SemanticState {
        basis: state.basis.clone(),
        coeffs,
        normalized: false,
    };
    out.refresh_flag();
    Ok(out)
}

/// `c_i ← c_i + δc_i` (rectangular addition), then renormalized. Labels absent
/// from `deltas` are left unperturbed.
pub fn perturb(state: &SemanticState, deltas: &HashMap<String, Complex64>) -> Result<SemanticState, StateError> {
    if let Some(unknown) = deltas.keys().find(|k| !state.basis.contains(k)) {
        return Err(StateError::UnknownLabel(unknown.clone()));
    }
    let coeffs = state
        .basis
        .iter()
        .zip(&state.coeffs)
        .map(|(l, c)| match deltas.get(l) {
            Some(d) if *d != Complex64::new(0.0, 0.0) => ComplexAmplitude::from_complex(c.to_complex() + d),
            _ => *c,
        })
        .collect();
    let shifted = SemanticState {
        basis: state.basis.clone(),
        coeffs,
        normalized: false,
    };
    normalize(&shifted)
}

/// `S_T = Σ_i conj(c_{1i}) c_{2i}` over identical bases.
pub fn complex_similarity(s1: &SemanticState, s2: &SemanticState) -> Result<ComplexAmplitude, StateError> {
    if s1.basis != s2.basis {
        return Err(StateError::BasisMismatch);
    }
    let sum: Complex64 = s1
        .coeffs
        .iter()
        .zip(&s2.coeffs)
        .map(|(a, b)| Complex64::from_polar(a.magnitude * b.magnitude, b.phase - a.phase))
        .sum();
    Ok(ComplexAmplitude::from_complex(sum))
}
