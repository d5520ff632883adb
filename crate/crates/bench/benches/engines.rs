use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use arzeta::forest::{art, ms_all_primes, SeriesRing};
use arzeta::ms::{compute_ms, Engine};
use arzeta::primes::primes_below;
use arzeta::zeta::{zeta_all_primes, ZetaOptions};
use arzeta::RingCtx;
use arzeta_bench::{conic, over, plane_cubic, series_sequence};

fn single_prime_engines(c: &mut Criterion) {
    let mut group = c.benchmark_group("ms_single_prime");
    group.sample_size(10);
    let f = plane_cubic();
    for p in [101u64, 1009] {
        let ctx = RingCtx::prime_field(p, 2).unwrap();
        let fp = over(&ctx, &f);
        for engine in [Engine::Linear, Engine::Sqrt] {
            group.bench_with_input(BenchmarkId::new(engine.name(), p), &p, |b, _| {
                b.iter(|| compute_ms(engine, &ctx, &fp, 1).unwrap())
            });
        }
    }
    group.finish();
}

fn remainder_tree(c: &mut Criterion) {
    let mut group = c.benchmark_group("art");
    group.sample_size(10);
    let ring = SeriesRing::new(4);
    for n in [256u64, 1024, 4096] {
        let e = series_sequence(&ring, n);
        let primes = primes_below(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| art(&ring, &e, 4, &primes).unwrap())
        });
    }
    group.finish();
}

fn all_primes(c: &mut Criterion) {
    let mut group = c.benchmark_group("all_primes");
    group.sample_size(10);
    let f = conic();
    for n in [64u64, 128, 256] {
        group.bench_with_input(BenchmarkId::new("ms_s1_lambda2", n), &n, |b, &n| {
            b.iter(|| ms_all_primes(&f, 1, n, 2).unwrap())
        });
    }
    let opts = ZetaOptions {
        d_bound: Some(4),
        ..Default::default()
    };
    group.bench_function("zeta_all_N30", |b| b.iter(|| zeta_all_primes(&f, 30, &opts).unwrap()));
    group.finish();
}

criterion_group!(benches, single_prime_engines, remainder_tree, all_primes);
criterion_main!(benches);
