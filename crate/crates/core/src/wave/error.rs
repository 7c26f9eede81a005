use std::path::PathBuf;

use thiserror::Error;

use crate::grid::GridError;

#[derive(Debug, Error)]
pub enum WaveError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("potential has {actual} samples, grid has {expected}")]
    PotentialMismatch { expected: usize, actual: usize },
    #[error("non-finite sample encountered at step {step}")]
    NonFinite { step: u64 },
    #[error("operation needs a 1D field, got {0}D")]
    NotOneDimensional(usize),
    #[error("evolution supports 1D and 2D grids up to {max} cells, got {dims}D with {cells} cells")]
    UnsupportedGrid { dims: usize, cells: usize, max: usize },
    #[error("k = {k} out of range for a grid of {n} points")]
    KOutOfRange { k: usize, n: usize },
    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("not a tunneling regime: E1 = {e1} is not below the barrier {barrier}")]
    NotTunnelingRegime { e1: f64, barrier: f64 },
    #[error("no occupancy oscillation detected within t = {max_time} (max deviation {max_deviation:e})")]
    NoOscillation { max_time: f64, max_deviation: f64 },
    #[error("observable series is empty")]
    EmptySeries,
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("bad snapshot {path}: {reason}")]
    BadSnapshot { path: PathBuf, reason: String },
}
