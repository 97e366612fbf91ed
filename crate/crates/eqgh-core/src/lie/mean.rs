//! Weighted intrinsic means on SO(n) and bump partitions of unity over
//! group-element nets.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::rotation::{
    geodesic_distance, principal_log, skew_exp, RotationError, Rotation,
};

/// Constants of the center-of-mass construction. The trust radius `r_conv`
/// and growth rate `R_growth` are configured, not derived: only their
/// existence is guaranteed, so stricter users can tighten them. `n_max`
/// should dominate the covering multiplicity of the nets in play.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComConfig {
    pub r_conv: f64,
    pub r_growth: f64,
    pub n_max: usize,
}

impl Default for ComConfig {
    fn default() -> Self {
        ComConfig {
            r_conv: 0.4,
            r_growth: 1.0,
            n_max: 3,
        }
    }
}

impl ComConfig {
    /// `K = 1 + R + ... + R^N`.
    pub fn k(&self) -> f64 {
        (0..=self.n_max).map(|i| self.r_growth.powi(i as i32)).sum()
    }

    /// Spread limit for the mean: inputs must stay within `r_conv / K`.
    pub fn spread_limit(&self) -> f64 {
        self.r_conv / self.k()
    }

    /// The contraction factor for m points: `1 + R + ... + R^m`.
    pub fn contraction_factor(&self, m: usize) -> f64 {
        (0..=m).map(|i| self.r_growth.powi(i as i32)).sum()
    }

    pub fn validate(&self) -> Result<(), RotationError> {
        if self.r_conv > 0.0 && self.r_growth >= 1.0 {
            Ok(())
        } else {
            Err(RotationError::BadWeights)
        }
    }
}

/// Weighted intrinsic mean: fixed point of stepping along the weighted
/// average of logarithm directions, starting at the heaviest point.
///
/// Zero-weight points are dropped up front, so they never influence the
/// output or the spread precondition. Stops when the step norm falls below
/// 1e-12 (raw Frobenius) or after 100 iterations.
pub fn karcher_mean(
    points: &[Rotation],
    weights: &[f64],
    cfg: &ComConfig,
) -> Result<Rotation, RotationError> {
    cfg.validate()?;
    if points.is_empty() || points.len() != weights.len() {
        return Err(RotationError::BadWeights);
    }
    if weights.iter().any(|&w| w < 0.0) {
        return Err(RotationError::BadWeights);
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(RotationError::BadWeights);
    }
    let active: Vec<(&Rotation, f64)> = points
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(p, &w)| (p, w))
        .collect();
    if active.is_empty() {
        return Err(RotationError::BadWeights);
    }
    if active.len() == 1 {
        return Ok(active[0].0.clone());
    }

    let mut spread = 0.0_f64;
    for (i, (p, _)) in active.iter().enumerate() {
        for (q, _) in &active[i + 1..] {
            spread = spread.max(geodesic_distance(p, q));
        }
    }
    let limit = cfg.spread_limit();
    if spread >= limit {
        return Err(RotationError::PointsTooSpread { spread, limit });
    }

    // Deterministic start: the heaviest active point, first on ties.
    let start = active
        .iter()
        .enumerate()
        .max_by(|(i, (_, wa)), (j, (_, wb))| wa.partial_cmp(wb).unwrap().then(j.cmp(i)))
        .map(|(i, _)| i)
        .unwrap();
    let mut current = active[start].0.clone();

    const MAX_ITERS: usize = 100;
    const STEP_TOL: f64 = 1e-12;
    for _ in 0..MAX_ITERS {
        let step = mean_tangent(&current, &active);
        if step.norm() < STEP_TOL {
            return Ok(current);
        }
        current = current.compose(&skew_exp(&step));
    }
    Err(RotationError::NoConvergence(MAX_ITERS))
}

/// The weighted sum of logarithm directions at `x`; vanishes exactly at
/// first-order optimality of `Σ λ_i d(x, p_i)²`.
pub fn mean_tangent(x: &Rotation, active: &[(&Rotation, f64)]) -> DMatrix<f64> {
    let n = x.n();
    let mut step = DMatrix::zeros(n, n);
    for (p, w) in active {
        let rel = x.inverse().compose(p);
        let (log, _) = principal_log(&rel);
        step += log * *w;
    }
    step
}

/// Convenience wrapper around `mean_tangent` for tests and reports.
pub fn weighted_log_direction(x: &Rotation, points: &[Rotation], weights: &[f64]) -> DMatrix<f64> {
    let active: Vec<(&Rotation, f64)> = points
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(p, &w)| (p, w))
        .collect();
    mean_tangent(x, &active)
}

/// A smooth compactly supported partition of unity over a net of group
/// elements: `w_j(g) ∝ h(d(g, p_j)/ν)` with `h(t) = exp(1 - 1/(1 - t²))`
/// inside the unit interval and 0 outside.
#[derive(Debug, Clone)]
pub struct BumpPartition {
    net: Vec<Rotation>,
    nu: f64,
}

fn bump_profile(t: f64) -> f64 {
    if t < 1.0 {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

impl BumpPartition {
    /// Requires the net points to be pairwise at least ν apart; that makes
    /// the weights at a net point exactly the delta at that point.
    pub fn new(net: Vec<Rotation>, nu: f64) -> Result<Self, RotationError> {
        if !(nu > 0.0) || net.is_empty() {
            return Err(RotationError::NetTooClose);
        }
        for (i, a) in net.iter().enumerate() {
            for b in &net[i + 1..] {
                if geodesic_distance(a, b) < nu {
                    return Err(RotationError::NetTooClose);
                }
            }
        }
        Ok(BumpPartition { net, nu })
    }

    pub fn net(&self) -> &[Rotation] {
        &self.net
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Normalized weights at a query element; fails with `NoCoverage` when
    /// every net point is at distance ≥ ν.
    pub fn weights(&self, g: &Rotation) -> Result<Vec<f64>, RotationError> {
        let raw: Vec<f64> = self
            .net
            .iter()
            .map(|p| bump_profile(geodesic_distance(g, p) / self.nu))
            .collect();
        let total: f64 = raw.iter().sum();
        if total <= 0.0 {
            return Err(RotationError::NoCoverage);
        }
        Ok(raw.into_iter().map(|w| w / total).collect())
    }
}
