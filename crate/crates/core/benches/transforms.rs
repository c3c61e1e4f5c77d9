//! Parallel versus single-threaded runs of the heavy stages, plus the two CT
//! engines. The single-threaded variant runs inside a one-thread rayon pool,
//! which exercises the same code as a `--no-default-features` build.

use std::f64::consts::PI;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sct_core::reassign::{sct, SctConfig};
use sct_core::transform::{chirplet_transform, CtEngine, CtOptions};
use sct_core::{Complex64, Signal, TfcGrid, WindowBank, WindowFamily};

fn crossing(len: usize) -> Signal {
    Signal::from_fn(len, 100.0, 0.0, |x| {
        Complex64::cis(2.0 * PI * (5.0 * x + 2.0 * x * x)) + Complex64::cis(2.0 * PI * (40.0 * x - 1.5 * x * x))
    })
    .unwrap()
}

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    vec![("1-thread", single), ("parallel", all)]
}

fn bench_ct(c: &mut Criterion) {
    let s = crossing(401);
    let bank = WindowBank::with_default_len(WindowFamily::g(0), 0.01).unwrap();
    let grid = TfcGrid::from_resolution(0.01, s.len(), 100.0).unwrap();
    let mut group = c.benchmark_group("ct");
    group.sample_size(10);
    for (name, pool) in pools() {
        for engine in [CtEngine::Folded, CtEngine::Direct] {
            let opts = CtOptions { engine, ..Default::default() };
            group.bench_function(BenchmarkId::new(format!("{engine:?}"), name), |b| {
                b.iter(|| pool.install(|| chirplet_transform(&s, &bank.h, &grid, opts).unwrap()))
            });
        }
    }
    group.finish();
}

fn bench_sct(c: &mut Criterion) {
    let s = crossing(401);
    let bank = WindowBank::with_default_len(WindowFamily::g(2), 0.01).unwrap();
    let grid = TfcGrid::from_resolution(0.01, s.len(), 100.0).unwrap();
    let mut group = c.benchmark_group("sct");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(name, |b| b.iter(|| pool.install(|| sct(&s, &bank, &grid, &SctConfig::default()).unwrap())));
    }
    group.finish();
}

criterion_group!(benches, bench_ct, bench_sct);
criterion_main!(benches);
