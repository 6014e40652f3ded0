use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use nrange_core::cnum::{c_sampled_with, counterexample_gap_with, CWeights};
use nrange_core::dilation::SearchBudget;
use nrange_core::ranges::omega_region_with;
use nrange_core::sampling::{gaussian_matrix, item_rng, random_contraction};
use nrange_core::verify::verify_glw;
use nrange_core::Exec;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn omega_region(c: &mut Criterion) {
    let mut group = c.benchmark_group("omega_region_720");
    for n in [8, 32] {
        let a = gaussian_matrix(n, n, &mut item_rng(1, n as u64));
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &a, |b, a| {
                b.iter(|| omega_region_with(black_box(a), 2, 720, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn glw_harness(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_glw_90");
    group.sample_size(10);
    let a = random_contraction(4, &mut item_rng(2, 0));
    for (name, exec) in MODES {
        let budget = SearchBudget::default().with_exec(exec);
        group.bench_function(name, |b| {
            b.iter(|| verify_glw(black_box(&a), 2, 90, &budget).unwrap())
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("monte_carlo");
    let a = gaussian_matrix(6, 6, &mut item_rng(3, 0));
    let weights = CWeights::real(&[1.0, 0.5, -0.25]).unwrap();
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("c_sampled_2000", name), |b| {
            b.iter(|| c_sampled_with(&weights, black_box(&a), 2000, 0, exec).unwrap())
        });
        group.bench_function(BenchmarkId::new("counterexample_1000", name), |b| {
            b.iter(|| counterexample_gap_with(1000, 0, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, omega_region, glw_harness, monte_carlo);
criterion_main!(benches);
