use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use semwave_core::gauge::coulomb_interaction;
use semwave_core::state::complex_similarity;
use semwave_core::wave::Evolver;
use semwave_core::{Complex64, GreensSpec, Grid, SemanticState, SplitMix64, WaveField};

fn split_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("split_step_100_steps");
    for n in [256usize, 1024, 4096] {
        let grid = Grid::line(-20.0, 20.0, n).unwrap();
        let psi = WaveField::from_fn(grid, |x| Complex64::new(1.0 / x[0].cosh(), 0.0)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &psi, |b, psi| {
            b.iter(|| {
                let mut ev = Evolver::new(psi.clone(), 1e-3, -1.0, None).unwrap();
                ev.advance(100).unwrap();
                black_box(ev.norm())
            })
        });
    }
    group.finish();
}

fn coulomb(c: &mut Criterion) {
    let mut group = c.benchmark_group("coulomb_2d");
    group.sample_size(10);
    let spec = GreensSpec::new(2).unwrap();
    for n in [16usize, 32, 48] {
        let grid = Grid::square(-4.0, 4.0, n).unwrap();
        let psi = WaveField::from_fn(grid, |x| Complex64::new((-(x[0] * x[0] + x[1] * x[1])).exp(), 0.0)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n * n), &psi, |b, psi| {
            b.iter(|| black_box(coulomb_interaction(psi, &spec).unwrap()))
        });
    }
    group.finish();
}

fn random_state(rng: &mut SplitMix64, labels: &[String]) -> SemanticState {
    let raw: Vec<(f64, f64)> = labels.iter().map(|_| (rng.next_f64() + 0.01, rng.uniform(-3.0, 3.0))).collect();
    let norm = raw.iter().map(|(m, _)| m * m).sum::<f64>().sqrt();
    SemanticState::from_polar(labels.iter().zip(&raw).map(|(l, (m, p))| (l.as_str(), m / norm, *p))).unwrap()
}

fn similarity(c: &mut Criterion) {
    let mut group = c.benchmark_group("complex_similarity");
    let mut rng = SplitMix64::new(7);
    for n in [16usize, 256, 4096] {
        let labels: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
        let (a, b) = (random_state(&mut rng, &labels), random_state(&mut rng, &labels));
        group.bench_with_input(BenchmarkId::from_parameter(n), &(a, b), |bench, (a, b)| {
            bench.iter(|| black_box(complex_similarity(a, b).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, split_step, coulomb, similarity);
criterion_main!(benches);
