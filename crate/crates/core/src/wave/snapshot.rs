//! Field snapshots: a binary file of little-endian `f64` pairs `(re, im)` in
//! row-major order, plus a JSON sidecar at the same path with a `.json`
//! extension holding `{dims, extents, counts, time}`.
//!
//! Real-valued components (e.g. one component of a gauge field) use the same
//! layout with zero imaginary parts.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::WaveError;
use crate::grid::{Axis, Grid, WaveField};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    pub dims: usize,
    /// `[min, max)` per axis.
    pub extents: Vec<[f64; 2]>,
    pub counts: Vec<usize>,
    pub time: f64,
}

impl SnapshotHeader {
    pub fn for_grid(grid: &Grid, time: f64) -> Self {
        Self {
            dims: grid.ndim(),
            extents: grid.axes().iter().map(|a| [a.min, a.max()]).collect(),
            counts: grid.shape(),
            time,
        }
    }

    pub fn grid(&self) -> Result<Grid, WaveError> {
        if self.extents.len() != self.dims || self.counts.len() != self.dims {
            return Err(WaveError::Config(format!(
                "sidecar lists {} extents and {} counts for {} dims",
                self.extents.len(),
                self.counts.len(),
                self.dims
            )));
        }
        let axes = self
            .extents
            .iter()
            .zip(&self.counts)
            .map(|(e, &n)| Axis::span(e[0], e[1], n))
            .collect();
        Ok(Grid::new(axes)?)
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> WaveError + '_ {
    move |source| WaveError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn bad(path: &Path, reason: impl Into<String>) -> WaveError {
    WaveError::BadSnapshot {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn write_raw(path: &Path, header: &SnapshotHeader, samples: impl Iterator<Item = Complex64>) -> Result<(), WaveError> {
    let mut bytes = Vec::new();
    for z in samples {
        bytes.extend_from_slice(&z.re.to_le_bytes());
        bytes.extend_from_slice(&z.im.to_le_bytes());
    }
    fs::write(path, bytes).map_err(io_err(path))?;
    let side = sidecar_path(path);
    let json = serde_json::to_string_pretty(header).expect("header serializes");
    fs::write(&side, json).map_err(io_err(&side))
}

fn read_raw(path: &Path) -> Result<(SnapshotHeader, Grid, Vec<Complex64>), WaveError> {
    let side = sidecar_path(path);
    let text = fs::read_to_string(&side).map_err(io_err(&side))?;
    let header: SnapshotHeader = serde_json::from_str(&text).map_err(|e| bad(&side, e.to_string()))?;
    let grid = header.grid()?;
    let bytes = fs::read(path).map_err(io_err(path))?;
    let want = grid.len() * 16;
    if bytes.len() != want {
        return Err(bad(path, format!("expected {want} bytes, found {}", bytes.len())));
    }
    let samples = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect();
    Ok((header, grid, samples))
}

pub fn write_snapshot(path: &Path, field: &WaveField, time: f64) -> Result<(), WaveError> {
    write_raw(path, &SnapshotHeader::for_grid(field.grid(), time), field.samples().iter().copied())
}

pub fn read_snapshot(path: &Path) -> Result<(WaveField, f64), WaveError> {
    let (header, grid, samples) = read_raw(path)?;
    let field = WaveField::new(grid, samples).map_err(|e| bad(path, e.to_string()))?;
    Ok((field, header.time))
}

pub fn write_real_component(path: &Path, grid: &Grid, values: &[f64]) -> Result<(), WaveError> {
    if values.len() != grid.len() {
        return Err(WaveError::PotentialMismatch {
            expected: grid.len(),
            actual: values.len(),
        });
    }
    write_raw(path, &SnapshotHeader::for_grid(grid, 0.0), values.iter().map(|&x| Complex64::new(x, 0.0)))
}

/// Read a real component; non-zero imaginary parts are rejected.
pub fn read_real_component(path: &Path) -> Result<(Grid, Vec<f64>), WaveError> {
    let (_, grid, samples) = read_raw(path)?;
    if let Some(i) = samples.iter().position(|z| z.im != 0.0) {
        return Err(bad(path, format!("sample {i} has a non-zero imaginary part")));
    }
    Ok((grid, samples.into_iter().map(|z| z.re).collect()))
}
