//! Equivariant pointed Gromov-Hausdorff ε-approximations between finite
//! pointed group metric spaces: certificate verification, search over a
//! finite ε-grid, and the two-sided distance estimate.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::GroupAction;
use crate::parallel;

/// Instance-size guards for the exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBounds {
    pub max_points: usize,
    pub max_group: usize,
    pub eps_max: f64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_points: 12,
            max_group: 12,
            eps_max: f64::INFINITY,
        }
    }
}

impl SearchBounds {
    /// Applies the `EQGH_SEARCH_BOUND` environment override to both the
    /// point and group guards, when set to a positive integer.
    pub fn from_env() -> Self {
        let mut bounds = SearchBounds::default();
        if let Ok(raw) = std::env::var("EQGH_SEARCH_BOUND") {
            if let Ok(v) = raw.trim().parse::<usize>() {
                if v > 0 {
                    bounds.max_points = v;
                    bounds.max_group = v;
                }
            }
        }
        bounds
    }

    pub fn with_sizes(max_points: usize, max_group: usize) -> Self {
        SearchBounds {
            max_points,
            max_group,
            eps_max: f64::INFINITY,
        }
    }

    fn admit(&self, src: &GroupAction, dst: &GroupAction) -> Result<(), EpghError> {
        let points = src.space().n().max(dst.space().n());
        let groups = src.group().order().max(dst.group().order());
        if points > self.max_points || groups > self.max_group {
            return Err(EpghError::InstanceTooLarge {
                points,
                groups,
                max_points: self.max_points,
                max_group: self.max_group,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Error)]
pub enum EpghError {
    #[error(
        "instance too large: {points} points / {groups} group elements \
         (limits {max_points} / {max_group})"
    )]
    InstanceTooLarge {
        points: usize,
        groups: usize,
        max_points: usize,
        max_group: usize,
    },
    #[error("no approximation below epsilon = {0}")]
    NoApproximationBelow(f64),
    #[error("malformed triple: {0}")]
    MalformedTriple(String),
}

/// The (f, φ, ψ) data of an ε-approximation. Maps are sorted by key;
/// `f` is defined on `ball(p, 1/ε)`, `phi` on `Γ(1/ε)` into `Λ(1/ε)`,
/// `psi` on `Λ(1/ε)` into `Γ(1/ε)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproximationTriple {
    pub epsilon: f64,
    pub f: Vec<(usize, usize)>,
    pub phi: Vec<(usize, usize)>,
    pub psi: Vec<(usize, usize)>,
}

impl ApproximationTriple {
    /// Identity triple between an action and itself.
    pub fn identity(action: &GroupAction, epsilon: f64) -> Self {
        let space = action.space();
        let ball = space.ball(space.basepoint(), 1.0 / epsilon);
        let gamma = action.gamma_r(1.0 / epsilon);
        ApproximationTriple {
            epsilon,
            f: ball.iter().map(|&x| (x, x)).collect(),
            phi: gamma.iter().map(|&g| (g, g)).collect(),
            psi: gamma.iter().map(|&g| (g, g)).collect(),
        }
    }

    fn lookup(map: &[(usize, usize)], key: usize) -> Option<usize> {
        map.binary_search_by_key(&key, |&(k, _)| k)
            .ok()
            .map(|i| map[i].1)
    }

    pub fn f_of(&self, x: usize) -> Option<usize> {
        Self::lookup(&self.f, x)
    }

    pub fn phi_of(&self, g: usize) -> Option<usize> {
        Self::lookup(&self.phi, g)
    }

    pub fn psi_of(&self, l: usize) -> Option<usize> {
        Self::lookup(&self.psi, l)
    }
}

/// Witness for a failed condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    Point(usize),
    PointPair(usize, usize),
    ElementPoint(usize, usize),
}

/// One condition of the Definition: the worst quantity it compares against
/// ε, and a witness when that comparison fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub passed: bool,
    pub worst_value: f64,
    pub witness: Option<Witness>,
}

impl ConditionReport {
    fn pass(worst_value: f64) -> Self {
        ConditionReport {
            passed: true,
            worst_value,
            witness: None,
        }
    }

    fn fail(worst_value: f64, witness: Witness) -> Self {
        ConditionReport {
            passed: false,
            worst_value,
            witness: Some(witness),
        }
    }
}

/// How condition (2) is read: the ε-neighborhood is taken around the image
/// `f(B(p, 1/ε))`, since comparing raw балls of different spaces is
/// ill-typed. Recorded on every report.
pub const CONDITION2_INTERPRETATION: &str =
    "epsilon-neighborhood of f(B(p,1/epsilon)) contains B(q,1/epsilon)";

/// Per-condition verification outcome for a triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub epsilon: f64,
    /// (1) f(p) = q.
    pub basepoint: ConditionReport,
    /// (2) image ε-density in B(q, 1/ε).
    pub coverage: ConditionReport,
    /// (3) distortion below ε on the ball.
    pub distortion: ConditionReport,
    /// (4) φ intertwines the actions up to ε.
    pub phi_equivariance: ConditionReport,
    /// (5) ψ intertwines the actions up to ε.
    pub psi_equivariance: ConditionReport,
    pub verdict: bool,
    /// min over conditions of (ε - worst value); negative iff some condition fails.
    pub worst_slack: f64,
    pub condition2_interpretation: String,
}

impl CertificateReport {
    pub fn conditions(&self) -> [&ConditionReport; 5] {
        [
            &self.basepoint,
            &self.coverage,
            &self.distortion,
            &self.phi_equivariance,
            &self.psi_equivariance,
        ]
    }
}

/// Checks the five Definition conditions for `triple` from `src` to `dst`,
/// with strict inequalities throughout. Domains must match `ball(p, 1/ε)`,
/// `Γ(1/ε)` and `Λ(1/ε)` exactly, else the triple is malformed.
pub fn verify_approximation(
    src: &GroupAction,
    dst: &GroupAction,
    triple: &ApproximationTriple,
) -> Result<CertificateReport, EpghError> {
    let eps = triple.epsilon;
    if !(eps > 0.0) {
        return Err(EpghError::MalformedTriple("epsilon must be positive".into()));
    }
    let r = 1.0 / eps;
    let sx = src.space();
    let sy = dst.space();
    let p = sx.basepoint();
    let q = sy.basepoint();

    let ball_src = sx.ball(p, r);
    let ball_dst = sy.ball(q, r);
    let gamma = src.gamma_r(r);
    let lambda = dst.gamma_r(r);

    let f_keys: Vec<usize> = triple.f.iter().map(|&(k, _)| k).collect();
    if f_keys != ball_src {
        return Err(EpghError::MalformedTriple(format!(
            "f domain {f_keys:?} does not match ball(p, 1/eps) = {ball_src:?}"
        )));
    }
    let phi_keys: Vec<usize> = triple.phi.iter().map(|&(k, _)| k).collect();
    if phi_keys != gamma {
        return Err(EpghError::MalformedTriple(format!(
            "phi domain {phi_keys:?} does not match Gamma(1/eps) = {gamma:?}"
        )));
    }
    let psi_keys: Vec<usize> = triple.psi.iter().map(|&(k, _)| k).collect();
    if psi_keys != lambda {
        return Err(EpghError::MalformedTriple(format!(
            "psi domain {psi_keys:?} does not match Lambda(1/eps) = {lambda:?}"
        )));
    }
    if triple.f.iter().any(|&(_, y)| y >= sy.n()) {
        return Err(EpghError::MalformedTriple("f maps outside target".into()));
    }
    if triple.phi.iter().any(|&(_, l)| !lambda.contains(&l)) {
        return Err(EpghError::MalformedTriple(
            "phi maps outside Lambda(1/eps)".into(),
        ));
    }
    if triple.psi.iter().any(|&(_, g)| !gamma.contains(&g)) {
        return Err(EpghError::MalformedTriple(
            "psi maps outside Gamma(1/eps)".into(),
        ));
    }

    // (1) f(p) = q.
    let fp = triple.f_of(p).expect("p lies in its own ball");
    let basepoint = if fp == q {
        ConditionReport::pass(0.0)
    } else {
        ConditionReport::fail(sy.dist(fp, q), Witness::Point(p))
    };

    // (2) every point of B(q, 1/eps) lies within eps of the image of f.
    let mut coverage = ConditionReport::pass(0.0);
    for &y in &ball_dst {
        let nearest = triple
            .f
            .iter()
            .map(|&(_, fx)| sy.dist(y, fx))
            .fold(f64::INFINITY, f64::min);
        if nearest > coverage.worst_value {
            coverage.worst_value = nearest;
            coverage.witness = Some(Witness::Point(y));
        }
    }
    coverage.passed = coverage.worst_value < eps;
    if coverage.passed {
        coverage.witness = None;
    }

    // (3) |dist(x, y) - dist(f(x), f(y))| < eps on the ball.
    let mut distortion = ConditionReport::pass(0.0);
    for &(x, fx) in &triple.f {
        for &(y, fy) in &triple.f {
            let v = (sx.dist(x, y) - sy.dist(fx, fy)).abs();
            if v > distortion.worst_value {
                distortion.worst_value = v;
                distortion.witness = Some(Witness::PointPair(x, y));
            }
        }
    }
    distortion.passed = distortion.worst_value < eps;
    if distortion.passed {
        distortion.witness = None;
    }

    // (4) dist(f(γx), φ(γ) f(x)) < eps whenever x, γx in the ball.
    let mut phi_cond = ConditionReport::pass(0.0);
    for &(g, phig) in &triple.phi {
        for &(x, fx) in &triple.f {
            let gx = src.apply(g, x);
            if let Some(fgx) = triple.f_of(gx) {
                let v = sy.dist(fgx, dst.apply(phig, fx));
                if v > phi_cond.worst_value {
                    phi_cond.worst_value = v;
                    phi_cond.witness = Some(Witness::ElementPoint(g, x));
                }
            }
        }
    }
    phi_cond.passed = phi_cond.worst_value < eps;
    if phi_cond.passed {
        phi_cond.witness = None;
    }

    // (5) dist(f(ψ(λ)x), λ f(x)) < eps whenever x, ψ(λ)x in the ball.
    let mut psi_cond = ConditionReport::pass(0.0);
    for &(l, psil) in &triple.psi {
        for &(x, fx) in &triple.f {
            let gx = src.apply(psil, x);
            if let Some(fgx) = triple.f_of(gx) {
                let v = sy.dist(fgx, dst.apply(l, fx));
                if v > psi_cond.worst_value {
                    psi_cond.worst_value = v;
                    psi_cond.witness = Some(Witness::ElementPoint(l, x));
                }
            }
        }
    }
    psi_cond.passed = psi_cond.worst_value < eps;
    if psi_cond.passed {
        psi_cond.witness = None;
    }

    let verdict = basepoint.passed
        && coverage.passed
        && distortion.passed
        && phi_cond.passed
        && psi_cond.passed;
    let base_slack = if basepoint.passed {
        f64::INFINITY
    } else {
        -basepoint.worst_value
    };
    let worst_slack = [
        base_slack,
        eps - coverage.worst_value,
        eps - distortion.worst_value,
        eps - phi_cond.worst_value,
        eps - psi_cond.worst_value,
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);

    Ok(CertificateReport {
        epsilon: eps,
        basepoint,
        coverage,
        distortion,
        phi_equivariance: phi_cond,
        psi_equivariance: psi_cond,
        verdict,
        worst_slack,
        condition2_interpretation: CONDITION2_INTERPRETATION.to_string(),
    })
}

/// The finite candidate grid on which the five conditions can change truth
/// value: all distances of either space, all absolute differences of such
/// distances, reciprocals of the positive distances (the 1/ε domain
/// thresholds), and midpoints between consecutive candidates.
pub fn epsilon_grid(a: &GroupAction, b: &GroupAction) -> Vec<f64> {
    let mut dists: Vec<f64> = Vec::new();
    for space in [a.space(), b.space()] {
        for row in space.matrix() {
            dists.extend_from_slice(row);
        }
    }
    dists.sort_by(f64::total_cmp);
    dists.dedup();

    let mut grid: Vec<f64> = Vec::new();
    for (i, &d1) in dists.iter().enumerate() {
        if d1 > 0.0 {
            grid.push(d1);
            grid.push(1.0 / d1);
        }
        for &d2 in &dists[i + 1..] {
            let v = (d2 - d1).abs();
            if v > 0.0 {
                grid.push(v);
            }
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut with_midpoints = Vec::with_capacity(grid.len() * 2);
    for (i, &v) in grid.iter().enumerate() {
        with_midpoints.push(v);
        if let Some(&next) = grid.get(i + 1) {
            let mid = 0.5 * (v + next);
            if mid > v && mid < next {
                with_midpoints.push(mid);
            }
        }
    }
    with_midpoints
}

/// Searches for a passing triple at one fixed ε. Returns the
/// lexicographically least passing triple (f ordered over the sorted ball
/// with f(p) = q pinned, then φ, ψ chosen least per element), or `None`.
pub fn find_triple_at_epsilon(
    src: &GroupAction,
    dst: &GroupAction,
    eps: f64,
) -> Option<ApproximationTriple> {
    let r = 1.0 / eps;
    let sx = src.space();
    let sy = dst.space();
    let p = sx.basepoint();
    let q = sy.basepoint();
    let ball_src = sx.ball(p, r);
    let ball_dst = sy.ball(q, r);
    let gamma = src.gamma_r(r);
    let lambda = dst.gamma_r(r);

    // Position of each source point inside the ball, for O(1) pair lookups.
    let mut pos_in_ball = vec![usize::MAX; sx.n()];
    for (i, &x) in ball_src.iter().enumerate() {
        pos_in_ball[x] = i;
    }

    // Admissible candidate tables for conditions (4) and (5). Entry
    // [g][cand] is false once some assigned pair witnesses a violation.
    // Condition (4): for γ, candidates λ' ∈ Λ(1/ε).
    // Condition (5): for λ, candidates g ∈ Γ(1/ε).
    let phi_alive = vec![vec![true; lambda.len()]; gamma.len()];
    let psi_alive = vec![vec![true; gamma.len()]; lambda.len()];

    let search = TripleSearch {
        src,
        dst,
        eps,
        ball_src: &ball_src,
        ball_dst: &ball_dst,
        gamma: &gamma,
        lambda: &lambda,
        pos_in_ball: &pos_in_ball,
    };

    let mut state = SearchState {
        f: vec![usize::MAX; ball_src.len()],
        phi_alive,
        psi_alive,
    };

    // Pin f(p) = q before branching.
    let p_pos = pos_in_ball[p];
    if !search.try_assign(&mut state, p_pos, q) {
        return None;
    }

    let first_free = (0..ball_src.len()).find(|&i| i != p_pos);
    let assignment = match first_free {
        None => {
            if search.leaf_ok(&state) {
                Some(state.f.clone())
            } else {
                None
            }
        }
        Some(i) => {
            let candidates: Vec<usize> = (0..sy.n()).collect();
            parallel::find_map_first(&candidates, |&y| {
                let mut branch = state.clone();
                if !search.try_assign(&mut branch, i, y) {
                    return None;
                }
                search.dfs(&mut branch, next_position(i, p_pos, ball_src.len()))
            })
        }
    }?;

    // Rebuild the admissibility tables for the final assignment and read off
    // the least admissible φ and ψ.
    let mut final_state = SearchState {
        f: vec![usize::MAX; ball_src.len()],
        phi_alive: vec![vec![true; lambda.len()]; gamma.len()],
        psi_alive: vec![vec![true; gamma.len()]; lambda.len()],
    };
    for (i, &y) in assignment.iter().enumerate() {
        if !search.try_assign(&mut final_state, i, y) {
            return None;
        }
    }
    let phi: Vec<(usize, usize)> = gamma
        .iter()
        .enumerate()
        .map(|(gi, &g)| {
            let li = final_state.phi_alive[gi].iter().position(|&a| a)?;
            Some((g, lambda[li]))
        })
        .collect::<Option<_>>()?;
    let psi: Vec<(usize, usize)> = lambda
        .iter()
        .enumerate()
        .map(|(li, &l)| {
            let gi = final_state.psi_alive[li].iter().position(|&a| a)?;
            Some((l, gamma[gi]))
        })
        .collect::<Option<_>>()?;

    Some(ApproximationTriple {
        epsilon: eps,
        f: ball_src.iter().copied().zip(assignment).collect(),
        phi,
        psi,
    })
}

fn next_position(current: usize, pinned: usize, len: usize) -> usize {
    let mut next = current + 1;
    if next == pinned {
        next += 1;
    }
    next.min(len)
}

#[derive(Clone)]
struct SearchState {
    f: Vec<usize>,
    phi_alive: Vec<Vec<bool>>,
    psi_alive: Vec<Vec<bool>>,
}

struct TripleSearch<'a> {
    src: &'a GroupAction,
    dst: &'a GroupAction,
    eps: f64,
    ball_src: &'a [usize],
    ball_dst: &'a [usize],
    gamma: &'a [usize],
    lambda: &'a [usize],
    pos_in_ball: &'a [usize],
}

impl TripleSearch<'_> {
    /// Assigns f(ball[i]) = y, checking pair distortion against assigned
    /// positions and narrowing the (4)/(5) admissibility tables. Returns
    /// false (leaving the state partially updated, caller discards) when the
    /// branch dies.
    fn try_assign(&self, state: &mut SearchState, i: usize, y: usize) -> bool {
        let sx = self.src.space();
        let sy = self.dst.space();
        let x = self.ball_src[i];
        for (j, &fj) in state.f.iter().enumerate() {
            if fj == usize::MAX {
                continue;
            }
            let xj = self.ball_src[j];
            if (sx.dist(x, xj) - sy.dist(y, fj)).abs() >= self.eps {
                return false;
            }
        }
        state.f[i] = y;

        // Narrow condition (4): new checkable pairs are those where x or a
        // previously assigned point completes an (x', γx') pair.
        for (gi, &g) in self.gamma.iter().enumerate() {
            for (x_from, x_to) in [(x, self.src.apply(g, x)), (inverse_apply(self.src, g, x), x)] {
                let from_pos = self.pos_in_ball.get(x_from).copied().unwrap_or(usize::MAX);
                let to_pos = self.pos_in_ball.get(x_to).copied().unwrap_or(usize::MAX);
                if from_pos == usize::MAX || to_pos == usize::MAX {
                    continue;
                }
                let (f_from, f_to) = (state.f[from_pos], state.f[to_pos]);
                if f_from == usize::MAX || f_to == usize::MAX {
                    continue;
                }
                let alive = &mut state.phi_alive[gi];
                for (li, &l) in self.lambda.iter().enumerate() {
                    if alive[li] && sy.dist(f_to, self.dst.apply(l, f_from)) >= self.eps {
                        alive[li] = false;
                    }
                }
                if alive.iter().all(|&a| !a) {
                    return false;
                }
            }
        }

        // Narrow condition (5): pairs (x', g x') with g = candidate for ψ(λ).
        for (li, &l) in self.lambda.iter().enumerate() {
            let mut any = false;
            for (gi, &g) in self.gamma.iter().enumerate() {
                if !state.psi_alive[li][gi] {
                    continue;
                }
                let mut alive = true;
                for (x_from, x_to) in
                    [(x, self.src.apply(g, x)), (inverse_apply(self.src, g, x), x)]
                {
                    let from_pos = self.pos_in_ball.get(x_from).copied().unwrap_or(usize::MAX);
                    let to_pos = self.pos_in_ball.get(x_to).copied().unwrap_or(usize::MAX);
                    if from_pos == usize::MAX || to_pos == usize::MAX {
                        continue;
                    }
                    let (f_from, f_to) = (state.f[from_pos], state.f[to_pos]);
                    if f_from == usize::MAX || f_to == usize::MAX {
                        continue;
                    }
                    if sy.dist(f_to, self.dst.apply(l, f_from)) >= self.eps {
                        alive = false;
                        break;
                    }
                }
                if !alive {
                    state.psi_alive[li][gi] = false;
                }
                any |= state.psi_alive[li][gi];
            }
            if !any {
                return false;
            }
        }
        true
    }

    fn dfs(&self, state: &mut SearchState, i: usize) -> Option<Vec<usize>> {
        if i >= self.ball_src.len() {
            return if self.leaf_ok(state) {
                Some(state.f.clone())
            } else {
                None
            };
        }
        let n_dst = self.dst.space().n();
        for y in 0..n_dst {
            let mut branch = state.clone();
            if !self.try_assign(&mut branch, i, y) {
                continue;
            }
            let pinned = self.pos_in_ball[self.src.space().basepoint()];
            if let Some(found) = self.dfs(&mut branch, next_position(i, pinned, self.ball_src.len()))
            {
                return Some(found);
            }
        }
        None
    }

    /// Full condition (2) coverage at a complete assignment. Conditions (4)
    /// and (5) feasibility is already encoded in the alive tables.
    fn leaf_ok(&self, state: &SearchState) -> bool {
        let sy = self.dst.space();
        self.ball_dst.iter().all(|&u| {
            state
                .f
                .iter()
                .any(|&fx| fx != usize::MAX && sy.dist(u, fx) < self.eps)
        })
    }
}

/// g⁻¹ · x.
fn inverse_apply(action: &GroupAction, g: usize, x: usize) -> usize {
    action.apply(action.group().inv(g), x)
}

/// One direction of the distance: the least grid ε admitting a passing
/// triple, with the lexicographically least witness.
pub fn search_approximation(
    src: &GroupAction,
    dst: &GroupAction,
) -> Result<(f64, ApproximationTriple), EpghError> {
    search_approximation_bounded(src, dst, &SearchBounds::default())
}

pub fn search_approximation_bounded(
    src: &GroupAction,
    dst: &GroupAction,
    bounds: &SearchBounds,
) -> Result<(f64, ApproximationTriple), EpghError> {
    bounds.admit(src, dst)?;
    let grid = epsilon_grid(src, dst);
    for &eps in grid.iter().filter(|&&e| e <= bounds.eps_max) {
        if let Some(triple) = find_triple_at_epsilon(src, dst, eps) {
            return Ok((eps, triple));
        }
    }
    Err(EpghError::NoApproximationBelow(bounds.eps_max))
}

/// Result of the two-directional search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpghDistance {
    pub epsilon: f64,
    pub forward: ApproximationTriple,
    pub backward: ApproximationTriple,
}

/// The least grid ε admitting passing triples in both directions.
pub fn epgh_distance(a: &GroupAction, b: &GroupAction) -> Result<EpghDistance, EpghError> {
    epgh_distance_bounded(a, b, &SearchBounds::default())
}

pub fn epgh_distance_bounded(
    a: &GroupAction,
    b: &GroupAction,
    bounds: &SearchBounds,
) -> Result<EpghDistance, EpghError> {
    bounds.admit(a, b)?;
    let grid = epsilon_grid(a, b);
    for &eps in grid.iter().filter(|&&e| e <= bounds.eps_max) {
        if let Some(forward) = find_triple_at_epsilon(a, b, eps) {
            if let Some(backward) = find_triple_at_epsilon(b, a, eps) {
                return Ok(EpghDistance {
                    epsilon: eps,
                    forward,
                    backward,
                });
            }
        }
    }
    Err(EpghError::NoApproximationBelow(bounds.eps_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic_shift_action, isometry_group, GroupAction};
    use crate::metric::{circle_space, gh_distance_bruteforce, validate_space};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn scaled_circle(n: usize, scale: f64) -> GroupAction {
        let base = circle_space(n);
        let space = validate_space(
            base.matrix()
                .iter()
                .map(|row| row.iter().map(|d| d * scale).collect())
                .collect(),
            0,
        )
        .unwrap();
        GroupAction::trivial_on(space)
    }

    #[test]
    fn identity_triple_passes_for_any_epsilon() {
        let a = cyclic_shift_action(circle_space(12), 12, 1).unwrap();
        for eps in [0.01, 0.1, 1.0, 10.0] {
            let triple = ApproximationTriple::identity(&a, eps);
            let report = verify_approximation(&a, &a, &triple).unwrap();
            assert!(report.verdict, "eps = {eps}: {report:?}");
        }
    }

    #[test]
    fn singleton_domains_pass_against_point_space() {
        // eps = 4 shrinks the ball below the circle's minimum gap, so all
        // quantifiers range over singletons.
        let a = cyclic_shift_action(circle_space(12), 12, 1).unwrap();
        let point = GroupAction::trivial_on(validate_space(vec![vec![0.0]], 0).unwrap());
        let eps = 4.0;
        let ball = a.space().ball(0, 1.0 / eps);
        assert_eq!(ball, vec![0]);
        let triple = ApproximationTriple {
            epsilon: eps,
            f: vec![(0, 0)],
            phi: a.gamma_r(1.0 / eps).iter().map(|&g| (g, 0)).collect(),
            psi: vec![(0, 0)],
        };
        let report = verify_approximation(&a, &point, &triple).unwrap();
        assert!(report.verdict);
    }

    #[test]
    fn swapped_phi_fails_condition_4_with_witness() {
        let a = cyclic_shift_action(circle_space(12), 12, 1).unwrap();
        let eps = 0.01;
        let mut triple = ApproximationTriple::identity(&a, eps);
        // Swap the images of two non-inverse rotations.
        let i1 = triple.phi.iter().position(|&(g, _)| g == 1).unwrap();
        let i3 = triple.phi.iter().position(|&(g, _)| g == 3).unwrap();
        triple.phi[i1].1 = 3;
        triple.phi[i3].1 = 1;
        let report = verify_approximation(&a, &a, &triple).unwrap();
        assert!(!report.verdict);
        assert!(!report.phi_equivariance.passed);
        assert!(matches!(
            report.phi_equivariance.witness,
            Some(Witness::ElementPoint(..))
        ));
    }

    #[test]
    fn malformed_domain_is_rejected() {
        let a = cyclic_shift_action(circle_space(12), 12, 1).unwrap();
        let mut triple = ApproximationTriple::identity(&a, 1.0);
        triple.f.pop();
        assert!(matches!(
            verify_approximation(&a, &a, &triple),
            Err(EpghError::MalformedTriple(_))
        ));
    }

    #[test]
    fn search_on_identical_actions_returns_smallest_grid_value() {
        let a = cyclic_shift_action(circle_space(6), 6, 1).unwrap();
        let (eps, triple) = search_approximation(&a, &a).unwrap();
        let grid = epsilon_grid(&a, &a);
        assert_eq!(eps, grid[0]);
        let report = verify_approximation(&a, &a, &triple).unwrap();
        assert!(report.verdict);
    }

    #[test]
    fn search_result_reverifies() {
        let a = cyclic_shift_action(circle_space(6), 3, 2).unwrap();
        let b = cyclic_shift_action(circle_space(6), 6, 1).unwrap();
        let (eps, triple) = search_approximation(&a, &b).unwrap();
        let report = verify_approximation(&a, &b, &triple).unwrap();
        assert!(report.verdict);
        assert_eq!(triple.epsilon, eps);
    }

    #[test]
    fn trivial_groups_cross_check_with_gh_oracle() {
        // Slightly scaled circle: with trivial groups and the optimum well
        // below the ball-truncation threshold 1/diameter, the distance
        // agrees with twice the GH oracle within one grid step.
        let a = scaled_circle(6, 1.0);
        let b = scaled_circle(6, 1.05);
        let result = epgh_distance(&a, &b).unwrap();
        let gh2 = 2.0 * gh_distance_bruteforce(a.space(), b.space()).unwrap();
        let grid = epsilon_grid(&a, &b);
        let k = grid.iter().position(|&g| g == result.epsilon).unwrap();
        let step = if k == 0 { grid[0] } else { grid[k] - grid[k - 1] };
        assert!(
            (result.epsilon - gh2).abs() <= step + 1e-12,
            "eps = {}, 2gh = {}, step = {}",
            result.epsilon,
            gh2,
            step
        );
    }

    #[test]
    fn scaled_circle_12_matches_gh_oracle_within_one_grid_step() {
        // Truncation lowers the pointed value below 2gh here, but the gap
        // stays within a single grid step.
        let a = scaled_circle(12, 1.0);
        let b = scaled_circle(12, 1.2);
        let res = epgh_distance(&a, &b).unwrap();
        let gh2 =
            2.0 * crate::metric::gh_distance_bruteforce_bounded(a.space(), b.space(), 24).unwrap();
        let grid = epsilon_grid(&a, &b);
        let k = grid.iter().position(|&g| g == res.epsilon).unwrap();
        let step = if k == 0 { grid[0] } else { grid[k] - grid[k - 1] };
        assert!((res.epsilon - gh2).abs() <= step + 1e-12);
    }

    #[test]
    fn verify_is_stable_under_quantifier_reordering() {
        // Re-check the conditions with every quantifier loop reversed; the
        // verdict must not depend on evaluation order.
        let a = cyclic_shift_action(circle_space(12), 3, 4).unwrap();
        let b = cyclic_shift_action(circle_space(12), 12, 1).unwrap();
        let (eps, triple) = search_approximation(&a, &b).unwrap();
        let report = verify_approximation(&a, &b, &triple).unwrap();
        assert!(report.verdict);

        let r = 1.0 / eps;
        let ball: Vec<usize> = a.space().ball(a.space().basepoint(), r);
        let mut rev_f = triple.f.clone();
        rev_f.reverse();
        // Condition (3) reversed.
        for &(x, fx) in rev_f.iter() {
            for &(y, fy) in rev_f.iter().rev() {
                assert!((a.space().dist(x, y) - b.space().dist(fx, fy)).abs() < eps);
            }
        }
        // Condition (2) reversed.
        for &y in b.space().ball(b.space().basepoint(), r).iter().rev() {
            assert!(rev_f.iter().any(|&(_, fx)| b.space().dist(y, fx) < eps));
        }
        // Conditions (4) and (5) reversed.
        for &(g, phig) in triple.phi.iter().rev() {
            for &x in ball.iter().rev() {
                let gx = a.apply(g, x);
                if let Some(fgx) = triple.f_of(gx) {
                    let fx = triple.f_of(x).unwrap();
                    assert!(b.space().dist(fgx, b.apply(phig, fx)) < eps);
                }
            }
        }
        for &(l, psil) in triple.psi.iter().rev() {
            for &x in ball.iter().rev() {
                let gx = a.apply(psil, x);
                if let Some(fgx) = triple.f_of(gx) {
                    let fx = triple.f_of(x).unwrap();
                    assert!(b.space().dist(fgx, b.apply(l, fx)) < eps);
                }
            }
        }
    }

    #[test]
    fn epgh_is_symmetric_on_fixtures() {
        let a = cyclic_shift_action(circle_space(6), 3, 2).unwrap();
        let b = cyclic_shift_action(circle_space(6), 6, 1).unwrap();
        let ab = epgh_distance(&a, &b).unwrap().epsilon;
        let ba = epgh_distance(&b, &a).unwrap().epsilon;
        assert_eq!(ab, ba);
        // Identical actions sit at the smallest grid candidate.
        let aa = epgh_distance(&a, &a).unwrap().epsilon;
        assert_eq!(aa, epsilon_grid(&a, &a)[0]);
    }

    #[test]
    fn regression_z3_vs_z12_on_circle_12() {
        let a = cyclic_shift_action(circle_space(12), 3, 4).unwrap();
        let b = cyclic_shift_action(circle_space(12), 12, 1).unwrap();
        let result = epgh_distance(&a, &b).unwrap();
        // Frozen from the exhaustive search: the threshold where the shift-4
        // rotation leaves Lambda(1/eps), i.e. the reciprocal of pi/3.
        assert_relative_eq!(result.epsilon, 3.0 / PI, max_relative = 1e-12);
        assert!(verify_approximation(&a, &b, &result.forward).unwrap().verdict);
        assert!(verify_approximation(&b, &a, &result.backward).unwrap().verdict);
    }

    #[test]
    fn fixed_group_vs_full_symmetries_stays_bounded_away_from_zero() {
        // (circle_n, Z_2) against (circle_n, full dihedral): the distance
        // does not shrink as n grows, because the groups differ in the limit.
        let mut values = Vec::new();
        for n in [6usize, 8, 10, 12] {
            let a = cyclic_shift_action(circle_space(n), 2, n / 2).unwrap();
            let b = isometry_group(&circle_space(n)).unwrap();
            let bounds = SearchBounds::with_sizes(12, 24);
            let eps = epgh_distance_bounded(&a, &b, &bounds).unwrap().epsilon;
            values.push(eps);
        }
        for &eps in &values {
            assert!(eps > 0.3, "values = {values:?}");
        }
    }

    #[test]
    fn restriction_monotonicity_on_fixtures() {
        // A passing triple, restricted to the smaller domains of a larger
        // eps, keeps passing on these fixtures.
        let a = cyclic_shift_action(circle_space(12), 3, 4).unwrap();
        let b = cyclic_shift_action(circle_space(12), 12, 1).unwrap();
        let (eps, triple) = search_approximation(&a, &b).unwrap();
        let grid = epsilon_grid(&a, &b);
        for &eps2 in grid.iter().filter(|&&e| e > eps) {
            let r = 1.0 / eps2;
            let ball = a.space().ball(a.space().basepoint(), r);
            let gamma = a.gamma_r(r);
            let lambda = b.gamma_r(r);
            let restricted = ApproximationTriple {
                epsilon: eps2,
                f: triple.f.iter().copied().filter(|&(x, _)| ball.contains(&x)).collect(),
                phi: triple
                    .phi
                    .iter()
                    .copied()
                    .filter(|&(g, _)| gamma.contains(&g))
                    .collect(),
                psi: triple
                    .psi
                    .iter()
                    .copied()
                    .filter(|&(l, _)| lambda.contains(&l))
                    .collect(),
            };
            match verify_approximation(&a, &b, &restricted) {
                Ok(report) => assert!(report.verdict, "restriction fails at eps = {eps2}"),
                // Codomain can leave Lambda(1/eps2); that counts as a domain
                // mismatch, not a failed certificate.
                Err(EpghError::MalformedTriple(_)) => {}
                Err(other) => panic!("unexpected: {other}"),
            }
        }
    }

    #[test]
    fn instance_guard_fires() {
        let a = cyclic_shift_action(circle_space(24), 24, 1).unwrap();
        assert!(matches!(
            search_approximation(&a, &a),
            Err(EpghError::InstanceTooLarge { .. })
        ));
    }
}

