//! Discrete-to-continuous pipeline: turn a map from a finite subgroup of a
//! rotation group into a continuous map, by composing a bump partition over
//! a ν-net in the source with a pushforward onto an η-net in the target and
//! the center-of-mass construction.

use serde::{Deserialize, Serialize};

use super::mean::{karcher_mean, BumpPartition, ComConfig};
use super::rotation::{geodesic_distance, Rotation, RotationError};
use crate::parallel;

/// Greedy maximal μ-separated subset of a rotation list, scanning in the
/// given order. Same construction as `action_geometry::minimal_net`, in the
/// bi-invariant metric.
pub fn greedy_rotation_net(points: &[Rotation], mu: f64) -> Vec<usize> {
    let mut members: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if members
            .iter()
            .all(|&m| geodesic_distance(p, &points[m]) >= mu)
        {
            members.push(i);
        }
    }
    members
}

/// Uniform η-net in SO(2): `floor(2/η)` equally spaced rotations. Covering
/// radius `1/M < η` and separation `2/M ≥ η` in the normalized metric.
pub fn so2_uniform_net(eta: f64) -> Vec<Rotation> {
    assert!(eta > 0.0 && eta < 1.0, "eta must lie in (0, 1)");
    let mut m = (2.0 / eta).floor() as usize;
    loop {
        let net: Vec<Rotation> = (0..m)
            .map(|k| Rotation::so2(2.0 * std::f64::consts::PI * k as f64 / m as f64))
            .collect();
        // Exact spacing is 2/m >= eta, but the computed distance can land an
        // ulp short; shrink until the measured separation holds.
        let separated = m < 2
            || net
                .windows(2)
                .all(|w| geodesic_distance(&w[0], &w[1]) >= eta);
        if separated {
            return net;
        }
        m -= 1;
    }
}

/// How to build the target η-net.
#[derive(Debug, Clone)]
pub enum TargetNet {
    /// The uniform net in SO(2).
    So2Uniform,
    /// Greedy η-net over an explicit sample of the target group.
    Points(Vec<Rotation>),
}

/// The continuous representative: source net with bump partition, target
/// net, the nearest-image map α between them, and the evaluation procedure.
#[derive(Debug, Clone)]
pub struct ContinuousMapRep {
    bump: BumpPartition,
    /// Indices of the source net inside the original element list.
    a_indices: Vec<usize>,
    b_net: Vec<Rotation>,
    /// For each source-net position, the index of its target-net image.
    alpha: Vec<usize>,
    cfg: ComConfig,
    pub nu: f64,
    pub eta: f64,
}

/// Diagnostic summary of a constructed map, serializable for reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContinuifySummary {
    pub source_net_size: usize,
    pub target_net_size: usize,
    pub nu: f64,
    pub eta: f64,
    pub k: f64,
    pub deviation_bound: f64,
}

/// Builds the continuous representative of `images` (one rotation per
/// source element).
///
/// Checks, rather than assumes, that ν-close source-net pairs have 3η-close
/// images in the target net, and that `3η < r/K` so the center of mass is
/// defined on every fiber of α.
pub fn continuify(
    source: &[Rotation],
    images: &[Rotation],
    nu: f64,
    eta: f64,
    target: &TargetNet,
    cfg: &ComConfig,
) -> Result<ContinuousMapRep, RotationError> {
    if source.is_empty() || source.len() != images.len() {
        return Err(RotationError::NetIncompatible(
            "source and image lists must be nonempty and equal length".into(),
        ));
    }
    cfg.validate()?;
    if !(3.0 * eta < cfg.spread_limit()) {
        return Err(RotationError::PointsTooSpread {
            spread: 3.0 * eta,
            limit: cfg.spread_limit(),
        });
    }

    let a_indices = greedy_rotation_net(source, nu);
    let a_points: Vec<Rotation> = a_indices.iter().map(|&i| source[i].clone()).collect();
    let b_net: Vec<Rotation> = match target {
        TargetNet::So2Uniform => so2_uniform_net(eta),
        TargetNet::Points(points) => {
            let members = greedy_rotation_net(points, eta);
            members.iter().map(|&i| points[i].clone()).collect()
        }
    };

    // α: nearest target-net point to the image of each source-net point.
    let alpha: Vec<usize> = a_indices
        .iter()
        .map(|&i| {
            let img = &images[i];
            let mut best = 0usize;
            let mut best_d = f64::INFINITY;
            for (b, pt) in b_net.iter().enumerate() {
                let d = geodesic_distance(img, pt);
                if d < best_d {
                    best_d = d;
                    best = b;
                }
            }
            best
        })
        .collect();

    // ν-close net points must have 3η-close images.
    for (i, &ai) in a_indices.iter().enumerate() {
        for (j, &aj) in a_indices.iter().enumerate().skip(i + 1) {
            if geodesic_distance(&source[ai], &source[aj]) < 2.0 * nu {
                let d = geodesic_distance(&b_net[alpha[i]], &b_net[alpha[j]]);
                if d >= 3.0 * eta {
                    return Err(RotationError::NetIncompatible(format!(
                        "net points {ai} and {aj} are within 2nu but their images \
                         are {d:.6} >= 3 eta apart"
                    )));
                }
            }
        }
    }

    let bump = BumpPartition::new(a_points, nu)?;
    Ok(ContinuousMapRep {
        bump,
        a_indices,
        b_net,
        alpha,
        cfg: *cfg,
        nu,
        eta,
    })
}

impl ContinuousMapRep {
    pub fn source_net_indices(&self) -> &[usize] {
        &self.a_indices
    }

    pub fn target_net(&self) -> &[Rotation] {
        &self.b_net
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    pub fn summary(&self) -> ContinuifySummary {
        let k = self.cfg.k();
        ContinuifySummary {
            source_net_size: self.a_indices.len(),
            target_net_size: self.b_net.len(),
            nu: self.nu,
            eta: self.eta,
            k,
            deviation_bound: self.eta * (3.0 * k + 4.0),
        }
    }

    /// Evaluates the continuous map at any group element of the source:
    /// bump weights over the ν-neighbors, pushed forward along α, then the
    /// center of mass of the hit target-net points. At a source-net point
    /// this returns exactly its α-image.
    pub fn eval(&self, g: &Rotation) -> Result<Rotation, RotationError> {
        let w = self.bump.weights(g)?;
        let mut pushed = vec![0.0_f64; self.b_net.len()];
        for (j, &wj) in w.iter().enumerate() {
            pushed[self.alpha[j]] += wj;
        }
        let active: Vec<(Rotation, f64)> = pushed
            .iter()
            .enumerate()
            .filter(|(_, &wb)| wb > 0.0)
            .map(|(b, &wb)| (self.b_net[b].clone(), wb))
            .collect();
        if active.len() == 1 {
            return Ok(active[0].0.clone());
        }
        let points: Vec<Rotation> = active.iter().map(|(p, _)| p.clone()).collect();
        let weights: Vec<f64> = active.iter().map(|(_, w)| *w).collect();
        karcher_mean(&points, &weights, &self.cfg)
    }

    /// Batch evaluation; queries run concurrently with order preserved.
    pub fn eval_batch(&self, queries: &[Rotation]) -> Vec<Result<Rotation, RotationError>> {
        parallel::map_collect(queries, |g| self.eval(g))
    }
}

/// Measurement helper for choosing η: the largest image distance over
/// source pairs closer than `threshold`. The modulus of continuity between
/// the action semimetric and the bi-invariant metric is not computable from
/// the inputs alone, so callers measure instead.
pub fn measure_modulus(source: &[Rotation], images: &[Rotation], threshold: f64) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..source.len() {
        for j in (i + 1)..source.len() {
            if geodesic_distance(&source[i], &source[j]) < threshold {
                worst = worst.max(geodesic_distance(&images[i], &images[j]));
            }
        }
    }
    worst
}
