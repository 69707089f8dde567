use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tasep_lab::clockfield::{derive_seed, ClockField, SiteWindow};
use tasep_lab::osp::simulate_osp;
use tasep_lab::par::{map_trials, map_trials_sequential};
use tasep_lab::tasep::{passage_time_table, table_window};

fn osp_absorbing(seed: u64, n: usize) -> f64 {
    let mut f = ClockField::new(seed, SiteWindow::new(1, n as i64).unwrap()).unwrap();
    simulate_osp(&mut f, n).unwrap().absorbing_time
}

fn tasep_corner(seed: u64) -> f64 {
    let mut f = ClockField::new(seed, table_window(0, 8, 8)).unwrap();
    passage_time_table(&mut f, 0, 8, 8).unwrap().get(8, 8)
}

fn trials(c: &mut Criterion) {
    let mut g = c.benchmark_group("osp_n50_x64");
    g.sample_size(20);
    g.bench_function(BenchmarkId::new("parallel", 64), |b| {
        b.iter(|| map_trials(64, |t| osp_absorbing(derive_seed(1, t as u64), black_box(50))))
    });
    g.bench_function(BenchmarkId::new("sequential", 64), |b| {
        b.iter(|| map_trials_sequential(64, |t| osp_absorbing(derive_seed(1, t as u64), black_box(50))))
    });
    g.finish();

    let mut g = c.benchmark_group("tasep_table8_x256");
    g.sample_size(20);
    g.bench_function(BenchmarkId::new("parallel", 256), |b| {
        b.iter(|| map_trials(256, |t| tasep_corner(derive_seed(2, t as u64))))
    });
    g.bench_function(BenchmarkId::new("sequential", 256), |b| {
        b.iter(|| map_trials_sequential(256, |t| tasep_corner(derive_seed(2, t as u64))))
    });
    g.finish();
}

criterion_group!(benches, trials);
criterion_main!(benches);
