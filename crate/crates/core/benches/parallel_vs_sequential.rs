use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use prmi::am::{self, AmConfig};
use prmi::exec::map_slice;
use prmi::oracle::{grid_min_classical_with, grid_min_quantum_qubit_with};
use prmi::{random, Execution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn oracles(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let p = random::joint_pmf(3, 3, &mut rng);
    let rho = random::bipartite_state(2, 2, &mut rng);
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("classical_3x3", name), &exec, |b, &e| {
            b.iter(|| grid_min_classical_with(black_box(&p), 1.5, 5e-3, e).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("quantum_qubit", name), &exec, |b, &e| {
            b.iter(|| grid_min_quantum_qubit_with(black_box(&rho), 1.5, 5e-2, e).unwrap())
        });
    }
    g.finish();
}

fn probes(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let rho = random::bipartite_state(2, 3, &mut rng);
    let mut g = c.benchmark_group("contraction_probe");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("2x3_200_trials", name), &exec, |b, &e| {
            b.iter(|| am::contraction_probe(black_box(&rho), 2.0, 200, 7, e).unwrap())
        });
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rho = random::bipartite_state(3, 3, &mut rng);
    let alphas = [0.6, 0.75, 0.9, 1.1, 1.25, 1.5, 1.75, 2.0];
    let mut g = c.benchmark_group("alpha_sweep");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("3x3_8_orders", name), &exec, |b, &e| {
            b.iter(|| {
                map_slice(e, &alphas, |&a| {
                    let eps = if a > 1.0 { 1e-6 } else { 1e-4 };
                    am::certified(black_box(&rho), &AmConfig::new(a, eps)).unwrap().final_x
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, oracles, probes, sweep);
criterion_main!(benches);
