use nalgebra::DMatrix;

use super::{EmbeddingError, EmbeddingSet, EmbeddingVector};

/// `S_C(a, b) = a·b / (|a||b|)`, clamped into `[-1, 1]`.
pub fn cosine_similarity(a: &EmbeddingVector, b: &EmbeddingVector) -> Result<f64, EmbeddingError> {
    a.check_dim(b)?;
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return Err(EmbeddingError::ZeroNorm);
    }
    let dot: f64 = a.values().iter().zip(b.values()).map(|(x, y)| x * y).sum();
    Ok((dot / (na * nb)).clamp(-1.0, 1.0))
}

/// Result of [`pca_project`].
#[derive(Debug, Clone)]
pub struct PcaProjection {
    pub tokens: Vec<String>,
    /// Row per token, `k` columns.
    pub coordinates: Vec<Vec<f64>>,
    /// Unit loading vector per component, each of length `dim`.
    pub components: Vec<Vec<f64>>,
    pub explained_variance_ratio: Vec<f64>,
    pub mean: Vec<f64>,
}

impl PcaProjection {
    pub fn coordinates_of(&self, token: &str) -> Option<&[f64]> {
        self.tokens
            .iter()
            .position(|t| t == token)
            .map(|i| self.coordinates[i].as_slice())
    }
}

/// Projects mean-centred embeddings onto their top `k` principal axes.
///
/// Components come out in nonincreasing variance order. Each loading vector
/// has its largest-magnitude entry made positive so signs are reproducible.
pub fn pca_project(set: &EmbeddingSet, k: usize) -> Result<PcaProjection, EmbeddingError> {
    let n = set.len();
    let d = set.dim();
    if n < 2 {
        return Err(EmbeddingError::TooFewEntries { needed: 2, actual: n });
    }
    let max_k = d.min(n);
    if k == 0 || k > max_k {
        return Err(EmbeddingError::ComponentsOutOfRange { k, max: max_k });
    }

    let mut mean = vec![0.0; d];
    for (_, v) in set.iter() {
        for (m, x) in mean.iter_mut().zip(v.values()) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);

    let rows: Vec<&[f64]> = set.iter().map(|(_, v)| v.values()).collect();
    let centered = DMatrix::from_fn(n, d, |i, j| rows[i][j] - mean[j]);
    let total: f64 = centered.iter().map(|x| x * x).sum();
    if total <= f64::EPSILON * f64::EPSILON {
        return Err(EmbeddingError::Degenerate);
    }

    let svd = centered.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

    let mut components = Vec::with_capacity(k);
    let mut ratios = Vec::with_capacity(k);
    for &idx in order.iter().take(k) {
        let mut axis: Vec<f64> = v_t.row(idx).iter().copied().collect();
        let pivot = axis
            .iter()
            .copied()
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(0.0);
        if pivot < 0.0 {
            axis.iter_mut().for_each(|x| *x = -*x);
        }
        let s = svd.singular_values[idx];
        ratios.push(s * s / total);
        components.push(axis);
    }

    let coordinates = (0..n)
        .map(|i| {
            components
                .iter()
                .map(|axis| centered.row(i).iter().zip(axis).map(|(x, a)| x * a).sum())
                .collect()
        })
        .collect();

    Ok(PcaProjection {
        tokens: set.tokens().to_vec(),
        coordinates,
        components,
        explained_variance_ratio: ratios,
        mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use proptest::prelude::*;

    fn v(xs: &[f64]) -> EmbeddingVector {
        EmbeddingVector::new(xs.to_vec()).unwrap()
    }

    fn set_of(rows: Vec<Vec<f64>>) -> EmbeddingSet {
        EmbeddingSet::from_entries(
            "t",
            rows.into_iter().enumerate().map(|(i, r)| (format!("t{i}"), v(&r))),
        )
        .unwrap()
    }

    #[test]
    fn cosine_examples() {
        let a = v(&[0.3, -1.2, 4.0]);
        assert!((cosine_similarity(&a, &a).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(cosine_similarity(&v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap(), 0.0);
        let s = cosine_similarity(&v(&[1.0, 0.0]), &v(&[1.0, 1.0])).unwrap();
        let oracle = (1.0 * 1.0 + 0.0 * 1.0) / (1.0 * 2f64.sqrt());
        assert!((s - oracle).abs() < 1e-9);
    }

    #[test]
    fn cosine_errors() {
        assert!(matches!(
            cosine_similarity(&v(&[0.0, 0.0]), &v(&[1.0, 1.0])),
            Err(EmbeddingError::ZeroNorm)
        ));
        assert!(matches!(
            cosine_similarity(&v(&[1.0]), &v(&[1.0, 1.0])),
            Err(EmbeddingError::DimensionMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn cosine_symmetric_bounded_scale_invariant(
            a in prop::collection::vec(-100.0f64..100.0, 6),
            b in prop::collection::vec(-100.0f64..100.0, 6),
            scale in 1e-3f64..1e3,
        ) {
            let va = v(&a);
            let vb = v(&b);
            prop_assume!(va.norm() > 1e-6 && vb.norm() > 1e-6);
            let ab = cosine_similarity(&va, &vb).unwrap();
            let ba = cosine_similarity(&vb, &va).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!(ab.abs() <= 1.0 + 1e-12);
            let scaled = v(&a.iter().map(|x| x * scale).collect::<Vec<_>>());
            prop_assert!((cosine_similarity(&scaled, &vb).unwrap() - ab).abs() < 1e-12);
        }
    }

    #[test]
    fn collinear_points_have_rank_one() {
        let dir = [1.0, -2.0, 0.5, 3.0, 1.5];
        let rows = [0.0, 1.0, 3.0]
            .iter()
            .map(|t| dir.iter().map(|d| 2.0 + t * d).collect())
            .collect();
        let p = pca_project(&set_of(rows), 2).unwrap();
        assert!((p.explained_variance_ratio[0] - 1.0).abs() < 1e-10);
        assert!(p.explained_variance_ratio[1].abs() < 1e-10);
    }

    #[test]
    fn full_projection_reconstructs_centered_data() {
        let mut rng = SplitMix64::new(7);
        let rows: Vec<Vec<f64>> = (0..10).map(|_| (0..5).map(|_| rng.normal()).collect()).collect();
        let set = set_of(rows.clone());
        let p = pca_project(&set, 5).unwrap();
        let sum: f64 = p.explained_variance_ratio.iter().sum();
        assert!(sum <= 1.0 + 1e-12);
        assert!(p.explained_variance_ratio.windows(2).all(|w| w[0] >= w[1]));
        for (i, row) in rows.iter().enumerate() {
            for j in 0..5 {
                let recon: f64 = (0..5).map(|c| p.coordinates[i][c] * p.components[c][j]).sum();
                assert!((recon - (row[j] - p.mean[j])).abs() < 1e-8);
            }
        }
        for axis in &p.components {
            let pivot = axis.iter().copied().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap();
            assert!(pivot > 0.0);
        }
    }

    #[test]
    fn pca_errors() {
        let set = set_of(vec![vec![1.0, 2.0], vec![1.0, 2.0]]);
        assert!(matches!(pca_project(&set, 1), Err(EmbeddingError::Degenerate)));
        let set = set_of(vec![vec![1.0, 2.0], vec![0.0, 2.0]]);
        assert!(matches!(pca_project(&set, 3), Err(EmbeddingError::ComponentsOutOfRange { .. })));
        assert!(matches!(pca_project(&set, 0), Err(EmbeddingError::ComponentsOutOfRange { .. })));
        let set = set_of(vec![vec![1.0, 2.0]]);
        assert!(matches!(pca_project(&set, 1), Err(EmbeddingError::TooFewEntries { .. })));
    }

    #[test]
    fn wide_data_uses_at_most_n_components() {
        let mut rng = SplitMix64::new(3);
        let rows: Vec<Vec<f64>> = (0..4).map(|_| (0..50).map(|_| rng.normal()).collect()).collect();
        let p = pca_project(&set_of(rows), 4).unwrap();
        // 4 centred points span at most 3 dimensions.
        assert!(p.explained_variance_ratio[3] < 1e-12);
        let sum: f64 = p.explained_variance_ratio.iter().sum();
        assert!((sum - 1.0).abs() < 1e-10);
    }
}
