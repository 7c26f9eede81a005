use thiserror::Error;

use crate::grid::GridError;

#[derive(Debug, Error)]
pub enum GaugeError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("Green's function needs N >= 1")]
    ZeroDimension,
    #[error("Green's function needs r > 0, got {0}")]
    NonPositiveRadius(f64),
    #[error("Green's function is for N = {spec}, grid is {grid}D")]
    DimensionMismatch { spec: usize, grid: usize },
    #[error("density is not finite at cell {0}")]
    NonFinite(usize),
    #[error("density is negative at cell {0}")]
    NegativeDensity(usize),
    #[error("{what} has {actual} entries, expected {expected}")]
    Length { what: &'static str, expected: usize, actual: usize },
    #[error("Coulomb sum over {cells} cells exceeds the cap of {cap}")]
    CellCap { cells: usize, cap: usize },
    #[error("term {term} requested but {missing} was not supplied")]
    MissingInput { term: &'static str, missing: &'static str },
    #[error("time step must be finite and non-zero, got {0}")]
    BadTimeStep(f64),
    #[error("effective action needs at least 2 snapshots, got {0}")]
    TooFewSnapshots(usize),
    #[error("snapshot times are not uniformly spaced (interval {index})")]
    NonUniformSpacing { index: usize },
}
