use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use wittgauss_bench::fixture;
use wittgauss_core::cyclo::CyclotomicInt;
use wittgauss_core::gauss::{
    ambient_order, dh_verify, gauss_sum_units_in, ClosedFormContext, DhConfig, KappaSpec,
    OracleTables,
};

fn bench_gauss_sums(c: &mut Criterion) {
    let mut group = c.benchmark_group("gauss_sum");
    for (p, k, n) in [(3u64, 1usize, 2usize), (5, 1, 3), (3, 2, 2)] {
        let fx = fixture(p, k, n);
        let m = ambient_order(&fx.group);
        let tables = OracleTables::new(&fx.group, &fx.psi, m);
        let chi = fx
            .chars
            .iter()
            .find(|c| c.conductor_exp() == n)
            .expect("full conductor exists");
        group.bench_with_input(
            BenchmarkId::new("naive", format!("p{p}k{k}n{n}")),
            &(),
            |b, _| b.iter(|| gauss_sum_units_in(chi, &fx.psi, m).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new("tabled", format!("p{p}k{k}n{n}")),
            &(),
            |b, _| b.iter(|| tables.tau(chi)),
        );
    }
    group.finish();
}

fn bench_closed_forms(c: &mut Criterion) {
    let mut group = c.benchmark_group("closed_form");
    for (p, k, n) in [(3u64, 1usize, 3usize), (5, 1, 3), (2, 2, 2)] {
        let fx = fixture(p, k, n);
        let m = ambient_order(&fx.group);
        let ctx = ClosedFormContext::new(&fx.group, &fx.psi, m).unwrap();
        let chi = fx
            .chars
            .iter()
            .find(|c| c.conductor_exp() == n)
            .expect("full conductor exists");
        group.bench_function(format!("p{p}k{k}n{n}"), |b| {
            b.iter(|| {
                if n % 2 == 1 {
                    ctx.odd(chi).unwrap()
                } else {
                    ctx.even(chi).unwrap()
                }
            })
        });
    }
    group.finish();
}

fn bench_dh_cell(c: &mut Criterion) {
    let mut group = c.benchmark_group("dh_cell");
    group.sample_size(10);
    for (p, k, n, s) in [(3u64, 1usize, 2usize, 2usize), (2, 1, 3, 2)] {
        let cfg = DhConfig {
            p,
            k,
            n,
            s,
            kappa: KappaSpec::One,
            convention: Default::default(),
            bound: 1 << 16,
        };
        group.bench_function(format!("p{p}k{k}n{n}s{s}"), |b| {
            b.iter(|| dh_verify(&cfg).unwrap())
        });
    }
    group.finish();
}

fn bench_cyclo_mul(c: &mut Criterion) {
    let mut group = c.benchmark_group("cyclo_mul");
    for m in [12u64, 72, 600] {
        // A dense element: the sum of all basis roots.
        let mut a = CyclotomicInt::zero(m);
        for j in 0..m {
            a = a.add(&CyclotomicInt::root(m, j as i64));
        }
        let b_elt = a.add(&CyclotomicInt::one(m));
        group.bench_function(format!("m{m}"), |bch| bch.iter(|| a.mul(&b_elt)));
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_gauss_sums,
    bench_closed_forms,
    bench_dh_cell,
    bench_cyclo_mul
);
criterion_main!(benches);
