use std::path::PathBuf;

use clap::Args;
use semwave_core::embedding::EmbeddingFormat;
use semwave_core::interference::{embedding_interference, two_wave_intensity};
use semwave_core::{InterferenceResult, PlaneWave};
use serde::{Deserialize, Serialize};

use super::{load_set, Overrides};
use crate::error::CliError;
use crate::output::{csv_table, num, Outputs};

#[derive(Debug, Args)]
pub struct Flags {
    #[arg(long)]
    embeddings: Option<PathBuf>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
}

impl Flags {
    pub fn overrides(&self) -> Vec<(&'static str, serde_json::Value)> {
        let embedding = self.embeddings.is_some() || self.a.is_some() || self.b.is_some();
        Overrides::new()
            .opt("source.kind", &embedding.then_some("embedding"))
            .path("source.embeddings", &self.embeddings)
            .opt("source.a", &self.a)
            .opt("source.b", &self.b)
            .opt("source.alpha", &self.alpha)
            .opt("source.beta", &self.beta)
            .opt("line.samples", &self.samples)
            .done()
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveSpec {
    #[serde(default = "one")]
    pub magnitude: f64,
    #[serde(default)]
    pub phase: f64,
    pub wavevector: Vec<f64>,
    #[serde(default)]
    pub omega: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Source {
    /// `k = α v`, relative phase `β arccos S_C`.
    Embedding {
        embeddings: PathBuf,
        #[serde(default)]
        format: Option<EmbeddingFormat>,
        a: String,
        b: String,
        #[serde(default = "one")]
        a1: f64,
        #[serde(default = "one")]
        a2: f64,
        #[serde(default = "one")]
        alpha: f64,
        #[serde(default = "one")]
        beta: f64,
    },
    Plane {
        waves: [WaveSpec; 2],
        #[serde(default)]
        t: f64,
    },
}

/// Points `origin + s·direction` for `s` uniform on `[s_min, s_max]`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Line {
    /// Defaults to the origin.
    #[serde(default)]
    pub origin: Option<Vec<f64>>,
    /// Defaults to the unit vector along the wavevector difference.
    #[serde(default)]
    pub direction: Option<Vec<f64>>,
    #[serde(default = "default_s_min")]
    pub s_min: f64,
    #[serde(default = "default_s_max")]
    pub s_max: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_s_min() -> f64 {
    -10.0
}
fn default_s_max() -> f64 {
    10.0
}
fn default_samples() -> usize {
    201
}

impl Default for Line {
    fn default() -> Self {
        Self {
            origin: None,
            direction: None,
            s_min: default_s_min(),
            s_max: default_s_max(),
            samples: default_samples(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub source: Source,
    #[serde(default)]
    pub line: Line,
}

fn unit_or_axis(d: Vec<f64>) -> Vec<f64> {
    let n = d.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        d.into_iter().map(|x| x / n).collect()
    } else {
        let mut e = vec![0.0; d.len()];
        if let Some(first) = e.first_mut() {
            *first = 1.0;
        }
        e
    }
}

pub fn run(p: &Params, out: &mut Outputs) -> Result<(), CliError> {
    let line = &p.line;
    if line.samples < 2 {
        return Err(CliError::config("line.samples", "must be >= 2"));
    }
    if !(line.s_min.is_finite() && line.s_max.is_finite() && line.s_min < line.s_max) {
        return Err(CliError::config("line.s_max", "need finite s_min < s_max"));
    }

    let set = match &p.source {
        Source::Embedding { embeddings, format, .. } => Some(load_set(embeddings, *format)?),
        Source::Plane { .. } => None,
    };
    let (dim, k_diff): (usize, Vec<f64>) = match (&p.source, &set) {
        (Source::Embedding { a, b, .. }, Some(set)) => {
            let (va, vb) = (set.require(a)?, set.require(b)?);
            (set.dim(), va.values().iter().zip(vb.values()).map(|(x, y)| x - y).collect())
        }
        (Source::Plane { waves, .. }, _) => {
            let [w1, w2] = waves;
            if w1.wavevector.len() != w2.wavevector.len() || w1.wavevector.is_empty() {
                return Err(CliError::config("source.waves", "wavevectors must share a non-zero dimension"));
            }
            (w1.wavevector.len(), w1.wavevector.iter().zip(&w2.wavevector).map(|(x, y)| x - y).collect())
        }
        (Source::Embedding { .. }, None) => unreachable!("embedding source always loads a set"),
    };
    let origin = line.origin.clone().unwrap_or_else(|| vec![0.0; dim]);
    let direction = line.direction.clone().map(unit_or_axis).unwrap_or_else(|| unit_or_axis(k_diff));
    if origin.len() != dim {
        return Err(CliError::config("line.origin", format!("expected {dim} components")));
    }
    if direction.len() != dim {
        return Err(CliError::config("line.direction", format!("expected {dim} components")));
    }

    let eval = |x: &[f64]| -> Result<InterferenceResult, CliError> {
        Ok(match &p.source {
            Source::Embedding { a, b, a1, a2, alpha, beta, .. } => {
                let set = set.as_ref().expect("loaded above");
                embedding_interference(set.require(a)?, set.require(b)?, *a1, *a2, *alpha, *beta, x)?
            }
            Source::Plane { waves, t } => {
                let mk = |w: &WaveSpec| PlaneWave::new(w.magnitude, w.phase, w.wavevector.clone(), w.omega);
                two_wave_intensity(&mk(&waves[0]), &mk(&waves[1]), x, *t)?
            }
        })
    };

    let last = (line.samples - 1) as f64;
    let mut rows = Vec::with_capacity(line.samples);
    for i in 0..line.samples {
        let s = line.s_min + (line.s_max - line.s_min) * i as f64 / last;
        let x: Vec<f64> = origin.iter().zip(&direction).map(|(o, d)| o + s * d).collect();
        let r = eval(&x)?;
        rows.push(vec![
            num(s),
            num(r.total),
            num(r.direct_terms.0),
            num(r.direct_terms.1),
            num(r.interference_term),
        ]);
    }
    out.text(
        "interference.csv",
        &csv_table(&["s", "total", "direct_1", "direct_2", "interference"], rows),
    )?;
    Ok(())
}
