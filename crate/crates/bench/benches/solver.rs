use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use renyidep::{
    brute_force_oracle, compute_j_alpha, compute_k_alpha, simulate_list_moment, AlphaOrder,
    JointPmf, Measure, SimParams, SolverConfig,
};

fn counterexample() -> JointPmf {
    JointPmf::from_rows(&[[0.43, 0.43, 0.02], [0.01, 0.01, 0.04], [0.01, 0.01, 0.04]]).unwrap()
}

/// A dense `n × n` joint with no product structure.
fn dense(n: usize) -> JointPmf {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|x| (0..n).map(|y| 1.0 + ((x * 7 + y * 3) % 5) as f64 + if x == y { 4.0 } else { 0.0 }).collect())
        .collect();
    let total: f64 = rows.iter().flatten().sum();
    let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| v / total).collect()).collect();
    JointPmf::from_rows(&rows).unwrap()
}

fn solver(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let mut g = c.benchmark_group("solve");
    for n in [3, 8, 32] {
        let j = if n == 3 { counterexample() } else { dense(n) };
        for al in [0.3, 0.5, 2.0] {
            let a = AlphaOrder::new(al).unwrap();
            g.bench_with_input(BenchmarkId::new(format!("J/n={n}"), al), &a, |b, &a| {
                b.iter(|| compute_j_alpha(black_box(&j), a, &cfg).unwrap())
            });
            g.bench_with_input(BenchmarkId::new(format!("K/n={n}"), al), &a, |b, &a| {
                b.iter(|| compute_k_alpha(black_box(&j), a, &cfg).unwrap())
            });
        }
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let j = counterexample();
    let a = AlphaOrder::new(0.5).unwrap();
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    for steps in [40, 120] {
        g.bench_with_input(BenchmarkId::new("K", steps), &steps, |b, &s| {
            b.iter(|| brute_force_oracle(black_box(&j), a, s, Measure::K).unwrap())
        });
    }
    g.finish();
}

fn simulator(c: &mut Criterion) {
    let j = JointPmf::from_rows(&[[0.4, 0.1], [0.1, 0.4]]).unwrap();
    let mut g = c.benchmark_group("simulate");
    g.sample_size(10);
    for (exact, n) in [(true, 6), (false, 12)] {
        let p = SimParams { n, rx: 0.9, ry: 0.9, rho: 1.0, trials: 100, seed: 0, exact };
        let name = if exact { "exact" } else { "monte_carlo" };
        g.bench_with_input(BenchmarkId::new(name, n), &p, |b, p| {
            b.iter(|| simulate_list_moment(black_box(&j), p).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, solver, oracle, simulator);
criterion_main!(benches);
