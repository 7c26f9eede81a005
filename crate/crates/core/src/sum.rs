//! Pairwise (tree) summation with a fixed split rule, so parallel callers get
//! bit-stable reductions independent of thread scheduling.

const LEAF: usize = 64;

pub(crate) fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}
