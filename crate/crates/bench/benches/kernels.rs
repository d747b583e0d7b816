use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use eqk_core::linalg::{lr_extension_feasible, snf};
use eqk_core::spaces::{eval_local, Side};
use eqk_core::{Catalog, IntMatrix, Partition, PrimeSpot, Settings, SpaceExpr};

/// A dense matrix with entries in [-9, 9] from a fixed linear congruence.
fn matrix(n: usize) -> IntMatrix {
    let mut x: u64 = 12345;
    let data: Vec<i64> = (0..n * n)
        .map(|_| {
            x = x
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((x >> 33) % 19) as i64 - 9
        })
        .collect();
    IntMatrix::from_i64(n, n, &data)
}

fn bench_snf(c: &mut Criterion) {
    let mut group = c.benchmark_group("snf");
    for n in [4, 8, 12] {
        let m = matrix(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| snf(black_box(m)))
        });
    }
    group.finish();
}

fn bench_lr(c: &mut Criterion) {
    let mut group = c.benchmark_group("lr_feasible");
    for n in [4u32, 6, 8] {
        let mids = Partition::all_of_size(n);
        let halves = Partition::all_of_size(n / 2);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| {
                let mut count = 0;
                for mid in &mids {
                    for sub in &halves {
                        for quot in &halves {
                            count += usize::from(lr_extension_feasible(mid, sub, quot));
                        }
                    }
                }
                count
            })
        });
    }
    group.finish();
}

fn bench_kunneth(c: &mut Criterion) {
    let cat = Catalog::bundled();
    let s: PrimeSpot = "I,3".parse().unwrap();
    let settings = Settings::default();
    let mut group = c.benchmark_group("kunneth");
    let spaces = [
        SpaceExpr::product(SpaceExpr::G, SpaceExpr::G),
        SpaceExpr::product(
            SpaceExpr::product(SpaceExpr::G, SpaceExpr::V),
            SpaceExpr::FreeCell(2),
        ),
        SpaceExpr::suspend_v(SpaceExpr::product(
            SpaceExpr::DisjointUnion(vec![SpaceExpr::Pt, SpaceExpr::G, SpaceExpr::V]),
            SpaceExpr::G,
        )),
    ];
    for e in &spaces {
        group.bench_with_input(BenchmarkId::from_parameter(e), e, |b, e| {
            b.iter(|| eval_local(black_box(e), &s, Side::Main, settings, &cat).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_snf, bench_lr, bench_kunneth);
criterion_main!(benches);
