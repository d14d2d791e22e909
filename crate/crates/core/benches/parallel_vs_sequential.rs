use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use weil_core::decomposition::QLambda;
use weil_core::group::GroupSpec;
use weil_core::numerics::{delta_matrix, run_verification, VerifyConfig, DEFAULT_MATRIX_CAP};
use weil_core::orbit::{closure_orbits, DEFAULT_ORBIT_CAP};
use weil_core::poset::{Partition, DEFAULT_IDEAL_CAP};
use weil_core::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn spec(p: u64, parts: &[u32]) -> GroupSpec {
    GroupSpec::new(p, Partition::new(parts.to_vec()).unwrap()).unwrap()
}

fn orbits(c: &mut Criterion) {
    let g = spec(3, &[3, 1]);
    let mut group = c.benchmark_group("closure_orbits/3,1@3");
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| closure_orbits(black_box(&g), DEFAULT_ORBIT_CAP, exec).unwrap()));
    }
    group.finish();
}

fn q_lambda(c: &mut Criterion) {
    let part = Partition::new(vec![5, 4, 3, 2, 1]).unwrap();
    let mut group = c.benchmark_group("q_lambda_mobius/5,4,3,2,1");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                let ql = QLambda::new(part.clone(), DEFAULT_IDEAL_CAP, exec).unwrap();
                ql.mobius().len()
            })
        });
    }
    group.finish();
}

fn deltas(c: &mut Criterion) {
    let g = spec(3, &[2, 2]);
    let full = g.poset().full();
    let mut group = c.benchmark_group("delta_matrix/2,2@3");
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| delta_matrix(&g, black_box(full), DEFAULT_MATRIX_CAP, exec).unwrap()));
    }
    group.finish();
}

fn verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for (p, parts) in [(3u64, &[2, 1][..]), (5, &[1, 1])] {
        let g = spec(p, parts);
        let ql = QLambda::new(g.partition().clone(), DEFAULT_IDEAL_CAP, Execution::Sequential).unwrap();
        for (name, exec) in MODES {
            let cfg = VerifyConfig { exec, ..VerifyConfig::default() };
            group.bench_with_input(BenchmarkId::new(name, format!("{parts:?}@{p}")), &cfg, |b, cfg| {
                b.iter(|| run_verification(&g, &ql, cfg).unwrap().passed)
            });
        }
    }
    group.finish();
}

criterion_group!(benches, orbits, q_lambda, deltas, verification);
criterion_main!(benches);
