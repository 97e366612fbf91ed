//! Finite pointed metric spaces: validation, balls, global invariants, and a
//! brute-force plain Gromov-Hausdorff distance oracle.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::parallel;

/// Relative tolerance for the triangle inequality during validation.
pub const TRIANGLE_TOL: f64 = 1e-9;

/// Default cap on `|X| + |Y|` for the brute-force GH search.
pub const DEFAULT_GH_SIZE_LIMIT: usize = 14;

/// A finite metric space with a distinguished basepoint.
///
/// Immutable after validation; all operations on it are pure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteMetricSpace {
    n: usize,
    basepoint: usize,
    dist: Vec<Vec<f64>>,
}

/// One violated metric axiom, with the witnessing indices.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricViolation {
    #[error("matrix is not square or basepoint {basepoint} is out of range for n = {n}")]
    BadShape { n: usize, basepoint: usize },
    #[error("dist[{0}][{1}] != dist[{1}][{0}]")]
    AsymmetricMatrix(usize, usize),
    #[error("dist[{0}][{1}] is negative")]
    NegativeDistance(usize, usize),
    #[error("dist[{0}][{0}] is not zero")]
    NonzeroDiagonal(usize),
    #[error("triangle violated: dist[{0}][{2}] > dist[{0}][{1}] + dist[{1}][{2}]")]
    TriangleViolation(usize, usize, usize),
    #[error("points {0} and {1} are at distance zero")]
    DuplicatePoint(usize, usize),
}

#[derive(Debug, Clone, Error)]
pub enum MetricError {
    #[error("metric axioms violated: {0:?}")]
    Invalid(Vec<MetricViolation>),
    #[error("instance too large: {size} exceeds limit {limit}")]
    InstanceTooLarge { size: usize, limit: usize },
}

/// Validates a full square distance matrix and wraps it as a space.
///
/// All axiom violations are collected rather than stopping at the first.
/// The triangle inequality is checked with a relative slack of
/// `TRIANGLE_TOL * max_entry` so that sampled circles and tori survive
/// generator round-off.
pub fn validate_space(
    dist: Vec<Vec<f64>>,
    basepoint: usize,
) -> Result<FiniteMetricSpace, MetricError> {
    let n = dist.len();
    let mut violations = Vec::new();
    if n == 0 || basepoint >= n || dist.iter().any(|row| row.len() != n) {
        violations.push(MetricViolation::BadShape { n, basepoint });
        return Err(MetricError::Invalid(violations));
    }
    let max_entry = dist
        .iter()
        .flat_map(|row| row.iter().copied())
        .fold(0.0_f64, f64::max);
    for i in 0..n {
        if dist[i][i] != 0.0 {
            violations.push(MetricViolation::NonzeroDiagonal(i));
        }
        for j in 0..n {
            if dist[i][j] < 0.0 {
                violations.push(MetricViolation::NegativeDistance(i, j));
            }
            if j > i {
                if dist[i][j] != dist[j][i] {
                    violations.push(MetricViolation::AsymmetricMatrix(i, j));
                }
                if dist[i][j] == 0.0 {
                    violations.push(MetricViolation::DuplicatePoint(i, j));
                }
            }
        }
    }
    let tol = TRIANGLE_TOL * max_entry;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if dist[i][k] > dist[i][j] + dist[j][k] + tol {
                    violations.push(MetricViolation::TriangleViolation(i, j, k));
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(FiniteMetricSpace { n, basepoint, dist })
    } else {
        Err(MetricError::Invalid(violations))
    }
}

impl FiniteMetricSpace {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    pub fn matrix(&self) -> &Vec<Vec<f64>> {
        &self.dist
    }

    /// Open ball `{ i : dist(center, i) < r }`. Membership is strict, with
    /// exact comparison on stored values; tolerance lives only in validation.
    pub fn ball(&self, center: usize, r: f64) -> Vec<usize> {
        (0..self.n).filter(|&i| self.dist[center][i] < r).collect()
    }

    pub fn diameter(&self) -> f64 {
        self.dist
            .iter()
            .flat_map(|row| row.iter().copied())
            .fold(0.0_f64, f64::max)
    }

    /// `rad X = min_p max_q dist(p, q)`.
    pub fn radius(&self) -> f64 {
        (0..self.n)
            .map(|p| self.dist[p].iter().copied().fold(0.0_f64, f64::max))
            .min_by(f64::total_cmp)
            .expect("space is nonempty")
    }

    pub fn min_positive_distance(&self) -> f64 {
        let mut m = f64::INFINITY;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                m = m.min(self.dist[i][j]);
            }
        }
        m
    }

    /// Rebases the space at a different point.
    pub fn with_basepoint(&self, basepoint: usize) -> Result<Self, MetricError> {
        validate_space(self.dist.clone(), basepoint)
    }
}

/// A relation between two index sets that covers both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correspondence {
    pub pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    /// Checks the covering invariant against the given sizes.
    pub fn covers(&self, n_source: usize, n_target: usize) -> bool {
        let mut src = vec![false; n_source];
        let mut dst = vec![false; n_target];
        for &(x, y) in &self.pairs {
            if x >= n_source || y >= n_target {
                return false;
            }
            src[x] = true;
            dst[y] = true;
        }
        src.iter().all(|&b| b) && dst.iter().all(|&b| b)
    }

    /// `max | dist_X(x, x') - dist_Y(y, y') |` over pairs of members.
    pub fn distortion(&self, x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
        let mut worst = 0.0_f64;
        for &(a, fa) in &self.pairs {
            for &(b, fb) in &self.pairs {
                worst = worst.max((x.dist(a, b) - y.dist(fa, fb)).abs());
            }
        }
        worst
    }
}

/// Half the minimal correspondence distortion, by branch-and-bound.
///
/// Every correspondence contains one of the form `graph(f) ∪ graph(g)ᵀ`
/// with `f : X → Y`, `g : Y → X`, and dropping pairs never increases the
/// distortion, so it suffices to search over such map pairs. Refuses
/// instances with `|X| + |Y|` above the limit.
pub fn gh_distance_bruteforce(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> Result<f64, MetricError> {
    gh_distance_bruteforce_bounded(x, y, DEFAULT_GH_SIZE_LIMIT)
}

pub fn gh_distance_bruteforce_bounded(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    size_limit: usize,
) -> Result<f64, MetricError> {
    let size = x.n() + y.n();
    if size > size_limit {
        return Err(MetricError::InstanceTooLarge {
            size,
            limit: size_limit,
        });
    }
    // Greedy seed: a real correspondence whose distortion upper-bounds the
    // optimum, so the search starts with a tight pruning bound.
    let seed = greedy_pair_distortion(x, y);

    // The first level of the f-assignment branches in parallel. The value is
    // a plain minimum, so pruning order cannot change the result.
    let first_candidates: Vec<usize> = (0..y.n()).collect();
    let best = parallel::map_collect(&first_candidates, |&y0| {
        let mut state = GhSearch {
            x,
            y,
            f: vec![usize::MAX; x.n()],
            g: vec![usize::MAX; y.n()],
            best: seed,
        };
        state.f[0] = y0;
        if state.partial_f_worst(0, y0) < state.best {
            state.assign_f(1);
        }
        state.best
    })
    .into_iter()
    .fold(f64::INFINITY, f64::min)
    .min(seed);
    Ok(best / 2.0)
}

/// Distortion of the correspondence built from index-greedy maps in both
/// directions; an upper bound on the optimum.
fn greedy_pair_distortion(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
    let greedy = |a: &FiniteMetricSpace, b: &FiniteMetricSpace| -> Vec<usize> {
        let mut f = vec![usize::MAX; a.n()];
        for i in 0..a.n() {
            let mut best = 0usize;
            let mut best_score = f64::INFINITY;
            for cand in 0..b.n() {
                let mut score = 0.0_f64;
                for j in 0..i {
                    score = score.max((a.dist(i, j) - b.dist(cand, f[j])).abs());
                }
                if score < best_score {
                    best_score = score;
                    best = cand;
                }
            }
            f[i] = best;
        }
        f
    };
    let f = greedy(x, y);
    let g = greedy(y, x);
    let pairs: Vec<(usize, usize)> = f
        .iter()
        .enumerate()
        .map(|(a, &fa)| (a, fa))
        .chain(g.iter().enumerate().map(|(b, &gb)| (gb, b)))
        .collect();
    Correspondence { pairs }.distortion(x, y)
}

struct GhSearch<'a> {
    x: &'a FiniteMetricSpace,
    y: &'a FiniteMetricSpace,
    f: Vec<usize>,
    g: Vec<usize>,
    best: f64,
}

impl GhSearch<'_> {
    fn partial_f_worst(&self, i: usize, cand: usize) -> f64 {
        let mut worst = 0.0_f64;
        for j in 0..i {
            worst = worst.max((self.x.dist(i, j) - self.y.dist(cand, self.f[j])).abs());
        }
        worst
    }

    fn assign_f(&mut self, i: usize) {
        if i == self.x.n() {
            self.assign_g(0);
            return;
        }
        // Best-first over candidates: tightens the bound early.
        let mut ranked: Vec<(f64, usize)> = (0..self.y.n())
            .map(|cand| (self.partial_f_worst(i, cand), cand))
            .collect();
        ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for (worst, cand) in ranked {
            if worst < self.best {
                self.f[i] = cand;
                self.assign_f(i + 1);
            }
        }
        self.f[i] = usize::MAX;
    }

    fn assign_g(&mut self, i: usize) {
        if i == self.y.n() {
            let value = self.full_distortion();
            if value < self.best {
                self.best = value;
            }
            return;
        }
        let mut ranked: Vec<(f64, usize)> = (0..self.x.n())
            .map(|cand| {
                let mut worst = 0.0_f64;
                for j in 0..i {
                    worst = worst.max((self.y.dist(i, j) - self.x.dist(cand, self.g[j])).abs());
                }
                // Cross terms against the already fixed f-graph.
                for (a, &fa) in self.f.iter().enumerate() {
                    worst = worst.max((self.x.dist(a, cand) - self.y.dist(fa, i)).abs());
                }
                (worst, cand)
            })
            .collect();
        ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for (worst, cand) in ranked {
            if worst < self.best {
                self.g[i] = cand;
                self.assign_g(i + 1);
            }
        }
        self.g[i] = usize::MAX;
    }

    fn full_distortion(&self) -> f64 {
        let mut worst = 0.0_f64;
        for a in 0..self.x.n() {
            for b in 0..self.x.n() {
                worst = worst.max((self.x.dist(a, b) - self.y.dist(self.f[a], self.f[b])).abs());
            }
        }
        for a in 0..self.y.n() {
            for b in 0..self.y.n() {
                worst = worst.max((self.y.dist(a, b) - self.x.dist(self.g[a], self.g[b])).abs());
            }
        }
        for (a, &fa) in self.f.iter().enumerate() {
            for (b, &gb) in self.g.iter().enumerate() {
                worst = worst.max((self.x.dist(a, gb) - self.y.dist(fa, b)).abs());
            }
        }
        worst
    }
}

/// Deterministic splitmix64, used by the space generators so that fixtures
/// and randomized suites are reproducible without an RNG dependency.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn next_below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// `n` equally spaced points on a circle of circumference `2π`, arc-length
/// metric, basepoint 0. Distances are filled from a per-gap table so that
/// rotations and reflections of the sample are bit-exact isometries.
pub fn circle_space(n: usize) -> FiniteMetricSpace {
    let gap_table: Vec<f64> = (0..=n / 2)
        .map(|k| 2.0 * std::f64::consts::PI * k as f64 / n as f64)
        .collect();
    space_from_gap_table(n, &gap_table)
}

/// A circle-like space from an explicit per-gap distance table
/// (`table[k]` = distance between samples `k` steps apart, `k <= n/2`).
/// Concave increasing tables yield valid metrics.
pub fn space_from_gap_table(n: usize, table: &[f64]) -> FiniteMetricSpace {
    assert!(table.len() > n / 2, "gap table too short");
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let gap = (i as isize - j as isize).unsigned_abs();
            let gap = gap.min(n - gap);
            dist[i][j] = table[gap];
        }
    }
    validate_space(dist, 0).expect("gap-table space must validate")
}

/// A random circle-like space: a concave increasing gap table built from
/// nonincreasing positive increments. Shift actions on it are exact
/// isometries, and the triangle inequality holds by subadditivity.
pub fn random_circle_like(n: usize, rng: &mut SplitMix64) -> FiniteMetricSpace {
    let mut increments: Vec<f64> = (0..n / 2).map(|_| rng.next_range(0.2, 1.0)).collect();
    increments.sort_by(|a, b| b.total_cmp(a));
    let mut table = vec![0.0];
    for inc in increments {
        table.push(table.last().unwrap() + inc);
    }
    space_from_gap_table(n, &table)
}

/// Perturbs a gap-table space by jittering the table, preserving concavity
/// (and hence validity) by keeping increments positive and nonincreasing.
pub fn perturb_gap_table(table: &[f64], magnitude: f64, rng: &mut SplitMix64) -> Vec<f64> {
    let mut increments: Vec<f64> = table.windows(2).map(|w| w[1] - w[0]).collect();
    for inc in increments.iter_mut() {
        *inc += rng.next_range(-magnitude, magnitude);
        *inc = inc.max(magnitude * 2.0 + 1e-6);
    }
    increments.sort_by(|a, b| b.total_cmp(a));
    let mut out = vec![0.0];
    for inc in increments {
        out.push(out.last().unwrap() + inc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn one_point_space_is_valid() {
        let s = validate_space(vec![vec![0.0]], 0).unwrap();
        assert_eq!(s.n(), 1);
        assert_eq!(s.radius(), 0.0);
    }

    #[test]
    fn two_point_space_is_valid() {
        let s = validate_space(vec![vec![0.0, 1.0], vec![1.0, 0.0]], 0).unwrap();
        assert_eq!(s.radius(), 1.0);
    }

    #[test]
    fn triangle_violation_is_reported() {
        let err = validate_space(
            vec![
                vec![0.0, 1.0, 3.0],
                vec![1.0, 0.0, 1.0],
                vec![3.0, 1.0, 0.0],
            ],
            0,
        )
        .unwrap_err();
        match err {
            MetricError::Invalid(violations) => {
                assert!(violations
                    .iter()
                    .any(|v| matches!(v, MetricViolation::TriangleViolation(0, 1, 2))));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn asymmetric_and_duplicate_are_reported() {
        let err = validate_space(vec![vec![0.0, 1.0], vec![0.5, 0.0]], 0).unwrap_err();
        let MetricError::Invalid(violations) = err else {
            panic!("expected Invalid")
        };
        assert!(violations
            .iter()
            .any(|v| matches!(v, MetricViolation::AsymmetricMatrix(0, 1))));

        let err = validate_space(vec![vec![0.0, 0.0], vec![0.0, 0.0]], 0).unwrap_err();
        let MetricError::Invalid(violations) = err else {
            panic!("expected Invalid")
        };
        assert!(violations
            .iter()
            .any(|v| matches!(v, MetricViolation::DuplicatePoint(0, 1))));
    }

    #[test]
    fn ball_on_circle_12() {
        let c = circle_space(12);
        assert!(c.ball(0, 0.0).is_empty());
        assert_eq!(c.ball(0, PI / 2.0), vec![0, 1, 2, 10, 11]);
        assert_eq!(c.ball(0, c.diameter() + 1.0).len(), 12);
    }

    #[test]
    fn radius_of_circle_is_half_circumference_over_two() {
        let c = circle_space(12);
        assert_relative_eq!(c.radius(), PI, max_relative = 1e-12);
        assert_relative_eq!(c.diameter(), PI, max_relative = 1e-12);
    }

    #[test]
    fn gh_identical_spaces_is_zero() {
        let c = circle_space(6);
        assert_eq!(gh_distance_bruteforce(&c, &c).unwrap(), 0.0);
    }

    #[test]
    fn gh_point_vs_segment_is_half() {
        let p = validate_space(vec![vec![0.0]], 0).unwrap();
        let s = validate_space(vec![vec![0.0, 1.0], vec![1.0, 0.0]], 0).unwrap();
        assert_relative_eq!(gh_distance_bruteforce(&p, &s).unwrap(), 0.5);
        assert_relative_eq!(gh_distance_bruteforce(&s, &p).unwrap(), 0.5);
    }

    #[test]
    fn gh_scaled_circle_4() {
        let c = circle_space(4);
        let scaled = validate_space(
            c.matrix()
                .iter()
                .map(|row| row.iter().map(|d| d * 1.1).collect())
                .collect(),
            0,
        )
        .unwrap();
        let d = gh_distance_bruteforce(&c, &scaled).unwrap();
        assert_relative_eq!(d, 0.05 * PI, max_relative = 1e-12);
    }

    #[test]
    fn gh_size_guard_fires() {
        let c = circle_space(12);
        let err = gh_distance_bruteforce(&c, &c).unwrap_err();
        assert!(matches!(err, MetricError::InstanceTooLarge { .. }));
        assert!(gh_distance_bruteforce_bounded(&c, &c, 24).is_ok());
    }

    /// Independent oracle: full enumeration of correspondences as subsets of
    /// the product, feasible for |X| * |Y| <= 16.
    fn gh_subset_oracle(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
        let cells: Vec<(usize, usize)> = (0..x.n())
            .flat_map(|i| (0..y.n()).map(move |j| (i, j)))
            .collect();
        let mut best = f64::INFINITY;
        for mask in 1u32..(1 << cells.len()) {
            let pairs: Vec<(usize, usize)> = cells
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, &c)| c)
                .collect();
            let corr = Correspondence { pairs };
            if corr.covers(x.n(), y.n()) {
                best = best.min(corr.distortion(x, y));
            }
        }
        best / 2.0
    }

    #[test]
    fn gh_matches_subset_enumeration_oracle() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..6 {
            let a = random_circle_like(4, &mut rng);
            let b = random_circle_like(3, &mut rng);
            let bb = gh_distance_bruteforce(&a, &b).unwrap();
            let oracle = gh_subset_oracle(&a, &b);
            assert_relative_eq!(bb, oracle, max_relative = 1e-12);
        }
    }

    /// Test-side permutation search: do the spaces admit a bijective
    /// relabeling matching the matrices within tolerance?
    fn isometric_by_permutation(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> bool {
        if a.n() != b.n() {
            return false;
        }
        fn extend(
            a: &FiniteMetricSpace,
            b: &FiniteMetricSpace,
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
            depth: usize,
        ) -> bool {
            if depth == a.n() {
                return true;
            }
            for cand in 0..b.n() {
                if used[cand] {
                    continue;
                }
                let ok = (0..depth)
                    .all(|j| (a.dist(depth, j) - b.dist(cand, map[j])).abs() <= 1e-12);
                if ok {
                    map.push(cand);
                    used[cand] = true;
                    if extend(a, b, map, used, depth + 1) {
                        return true;
                    }
                    used[cand] = false;
                    map.pop();
                }
            }
            false
        }
        extend(a, b, &mut Vec::new(), &mut vec![false; b.n()], 0)
    }

    #[test]
    fn gh_vanishes_iff_isometric_small() {
        let mut rng = SplitMix64::new(21);
        for n in [3usize, 4, 5, 6, 7, 8] {
            let a = random_circle_like(n, &mut rng);
            // A relabeled copy is isometric.
            let perm: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            let mut m = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    m[perm[i]][perm[j]] = a.dist(i, j);
                }
            }
            let b = validate_space(m, 0).unwrap();
            assert!(isometric_by_permutation(&a, &b));
            assert_eq!(gh_distance_bruteforce_bounded(&a, &b, 16).unwrap(), 0.0);

            // Scaling strictly apart makes the distance positive.
            let scaled = validate_space(
                a.matrix()
                    .iter()
                    .map(|row| row.iter().map(|d| d * 1.5).collect())
                    .collect(),
                0,
            )
            .unwrap();
            assert!(!isometric_by_permutation(&a, &scaled));
            assert!(gh_distance_bruteforce_bounded(&a, &scaled, 16).unwrap() > 0.0);
        }
    }

    proptest! {
        #[test]
        fn ball_is_monotone_in_radius(seed in 0u64..500, r1 in 0.0f64..4.0, r2 in 0.0f64..4.0) {
            let mut rng = SplitMix64::new(seed);
            let s = random_circle_like(8, &mut rng);
            let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
            let small = s.ball(0, lo);
            let big = s.ball(0, hi);
            prop_assert!(small.iter().all(|i| big.contains(i)));
        }

        #[test]
        fn radius_diameter_sandwich(seed in 0u64..500, n in 3usize..10) {
            let mut rng = SplitMix64::new(seed);
            let s = random_circle_like(n, &mut rng);
            let r = s.radius();
            let d = s.diameter();
            prop_assert!(r <= d + 1e-12);
            prop_assert!(d <= 2.0 * r + 1e-12);
        }

        #[test]
        fn generators_always_validate(seed in 0u64..500, n in 3usize..12) {
            let mut rng = SplitMix64::new(seed);
            let s = random_circle_like(n, &mut rng);
            prop_assert!(validate_space(s.matrix().clone(), 0).is_ok());
            let perturbed = perturb_gap_table(
                &(0..=n / 2).map(|k| s.dist(0, k)).collect::<Vec<_>>(),
                0.01,
                &mut rng,
            );
            prop_assert!(validate_space(space_from_gap_table(n, &perturbed).matrix().clone(), 0).is_ok());
        }

        #[test]
        fn gh_is_symmetric(seed in 0u64..60) {
            let mut rng = SplitMix64::new(seed);
            let a = random_circle_like(4 + (seed % 3) as usize, &mut rng);
            let b = random_circle_like(3 + (seed % 4) as usize, &mut rng);
            let ab = gh_distance_bruteforce(&a, &b).unwrap();
            let ba = gh_distance_bruteforce(&b, &a).unwrap();
            prop_assert!((ab - ba).abs() < 1e-12);
        }
    }
}
