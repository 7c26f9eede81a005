//! Numerical toolkit for complexified embedding spaces.
//!
//! The crate is organised by subsystem:
//!
//! - [`embedding`]: real-valued embedding sets, file formats, a cached
//!   provider client, cosine similarity, PCA and the balanced-token scan.
//! - [`state`]: complex semantic states over a token basis, measurement,
//!   operators, perturbations and the complex similarity `S_T`.
//! - [`interference`]: two-wave intensities and the embedding-derived
//!   interference formula.
//! - [`potential`]: double-well and Mexican-hat landscapes and seeded
//!   symmetry breaking.
//! - [`wave`]: split-step evolution of wave fields, a finite-difference
//!   eigensolver, tunneling measurement and charge-conservation reports.
//! - [`gauge`]: Laplacian Green's functions, the scalar-potential solve,
//!   semantic current, the Coulomb gauge check and per-term Lagrangian
//!   and action breakdowns.
//!
//! Units throughout are `ħ = m = 1` and the gauge charge is fixed to `g = 1`.

pub mod embedding;
pub mod gauge;
pub mod grid;
pub mod interference;
pub mod potential;
pub mod rng;
pub mod state;
pub mod wave;

mod fft;
mod sum;

pub use embedding::{EmbeddingError, EmbeddingSet, EmbeddingVector, EmbeddingFormat};
pub use gauge::{ActionBreakdown, GaugeError, GreensSpec, GreensSign};
pub use grid::{Axis, DerivativeScheme, Grid, GridError, WaveField};
pub use interference::{InterferenceError, InterferenceResult, PlaneWave};
pub use potential::{DoubleWellParams, MexicanHatParams, PotentialError, VacuumState};
pub use rng::SplitMix64;
pub use state::{ComplexAmplitude, MeasurementRecord, SemanticState, StateError};
pub use wave::{ChargeReport, EvolutionConfig, ObservableSeries, WaveError};

pub use num_complex::Complex64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
