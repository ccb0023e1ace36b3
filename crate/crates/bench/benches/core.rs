use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cfk_core::infinite::infinite_ball;
use cfk_core::sampler::{sample_many, sample_wn};
use cfk_core::word::reduce;
use cfk_core::{psi, psi_inverse, InfiniteWordSource, ModelParams};

fn third() -> ModelParams {
    ModelParams::from_p(1.0 / 3.0).unwrap()
}

fn words(c: &mut Criterion) {
    let params = third();
    let mut g = c.benchmark_group("words");
    for n in [16usize, 64, 256] {
        let w = sample_many(&params, n, 1, 1, None).unwrap().remove(0);
        g.bench_with_input(BenchmarkId::new("reduce", n), &w, |b, w| {
            b.iter(|| reduce(black_box(w)))
        });
    }
    for n in [8usize, 32] {
        g.bench_with_input(BenchmarkId::new("sample_wn", n), &n, |b, &n| {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            b.iter(|| sample_wn(&params, n, &mut rng, None).unwrap())
        });
    }
    g.finish();
}

fn bijection(c: &mut Criterion) {
    let params = third();
    let mut g = c.benchmark_group("bijection");
    for n in [16usize, 64, 256] {
        let w = sample_many(&params, n, 1, 2, None).unwrap().remove(0);
        let m = psi(&w).unwrap();
        g.bench_with_input(BenchmarkId::new("psi", n), &w, |b, w| {
            b.iter(|| psi(black_box(w)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("psi_inverse", n), &m, |b, m| {
            b.iter(|| psi_inverse(black_box(m)).unwrap())
        });
    }
    g.finish();
}

fn limit(c: &mut Criterion) {
    let mut g = c.benchmark_group("limit");
    g.sample_size(20);
    for r in [1usize, 2] {
        g.bench_with_input(BenchmarkId::new("infinite_ball", r), &r, |b, &r| {
            let mut seed = 0;
            b.iter(|| {
                seed += 1;
                let mut src = InfiniteWordSource::new(third(), seed);
                infinite_ball(&mut src, r, 1 << 20).ok()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, words, bijection, limit);
criterion_main!(benches);
