//! Compares the rayon dispatch path against the always-compiled sequential
//! fallback on the three hot kernels: seminorm tables, batched intrinsic
//! means, and the ε-grid scan of the approximation search.
//!
//! Building with `--no-default-features` makes the dispatch path itself
//! sequential; the `*/parallel` ids then measure the fallback end to end.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use eqgh_core::action_geometry::action_seminorm;
use eqgh_core::epgh::{epsilon_grid, find_triple_at_epsilon};
use eqgh_core::groups::{cyclic_shift_action, isometry_group_bounded};
use eqgh_core::lie::{karcher_mean, skew_exp, ComConfig, Rotation};
use eqgh_core::metric::{circle_space, SplitMix64};
use eqgh_core::parallel;

fn bench_seminorm_table(c: &mut Criterion) {
    let action = isometry_group_bounded(&circle_space(36), 64).unwrap();
    let radius = action.space().diameter() * 0.8;
    let order = action.group().order();
    let mut group = c.benchmark_group("seminorm_table");
    group.bench_function("sequential", |b| {
        b.iter(|| {
            black_box(parallel::sequential::map_indexed(order, |g| {
                action_seminorm(&action, g, radius)
            }))
        })
    });
    group.bench_function("parallel", |b| {
        b.iter(|| {
            black_box(parallel::map_indexed(order, |g| {
                action_seminorm(&action, g, radius)
            }))
        })
    });
    group.finish();
}

fn bench_karcher_batch(c: &mut Criterion) {
    let mut rng = SplitMix64::new(7);
    let cfg = ComConfig::default();
    let batches: Vec<(Vec<Rotation>, Vec<f64>)> = (0..512)
        .map(|_| {
            let base = Rotation::so3_axis_angle(
                [
                    rng.next_range(-1.0, 1.0),
                    rng.next_range(-1.0, 1.0),
                    rng.next_range(-1.0, 1.0),
                ],
                rng.next_range(-3.0, 3.0),
            );
            let points: Vec<Rotation> = (0..3)
                .map(|_| {
                    let mut skew = nalgebra::DMatrix::zeros(3, 3);
                    let (x, y, z) = (
                        rng.next_range(-0.08, 0.08),
                        rng.next_range(-0.08, 0.08),
                        rng.next_range(-0.08, 0.08),
                    );
                    skew[(0, 1)] = -z;
                    skew[(1, 0)] = z;
                    skew[(0, 2)] = y;
                    skew[(2, 0)] = -y;
                    skew[(1, 2)] = -x;
                    skew[(2, 1)] = x;
                    base.compose(&skew_exp(&skew))
                })
                .collect();
            (points, vec![0.5, 0.3, 0.2])
        })
        .collect();
    let mut group = c.benchmark_group("karcher_batch");
    group.bench_function("sequential", |b| {
        b.iter(|| {
            black_box(parallel::sequential::map_collect(&batches, |(p, w)| {
                karcher_mean(p, w, &cfg).unwrap()
            }))
        })
    });
    group.bench_function("parallel", |b| {
        b.iter(|| {
            black_box(parallel::map_collect(&batches, |(p, w)| {
                karcher_mean(p, w, &cfg).unwrap()
            }))
        })
    });
    group.finish();
}

fn bench_epgh_grid_scan(c: &mut Criterion) {
    let a = cyclic_shift_action(circle_space(12), 3, 4).unwrap();
    let b = cyclic_shift_action(circle_space(12), 12, 1).unwrap();
    let grid = epsilon_grid(&a, &b);
    // Scan up to and including the first passing candidate.
    let pass_at = grid
        .iter()
        .position(|&eps| find_triple_at_epsilon(&a, &b, eps).is_some())
        .unwrap();
    let prefix: Vec<f64> = grid[..=pass_at].to_vec();
    let mut group = c.benchmark_group("epgh_grid_scan");
    group.bench_function("sequential", |bch| {
        bch.iter(|| {
            black_box(parallel::sequential::find_map_first(&prefix, |&eps| {
                find_triple_at_epsilon(&a, &b, eps)
            }))
        })
    });
    group.bench_function("parallel", |bch| {
        bch.iter(|| {
            black_box(parallel::find_map_first(&prefix, |&eps| {
                find_triple_at_epsilon(&a, &b, eps)
            }))
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_seminorm_table,
    bench_karcher_batch,
    bench_epgh_grid_scan
);
criterion_main!(benches);
