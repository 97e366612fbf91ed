//! The geometry a group inherits from its action: the pseudoseminorm
//! `‖g‖_R = sup { dist(x, gx) : x, gx ∈ B(p, R) }`, the induced
//! right-invariant pseudosemimetric, regime reports, and minimal μ-nets
//! with covering multiplicity.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::GroupAction;
use crate::metric::FiniteMetricSpace;
use crate::parallel;

/// Which side the pseudosemimetric is invariant on. The displayed
/// convention is right-invariant; the left variant is exposed but carries
/// no fixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Invariance {
    #[default]
    Right,
    Left,
}

/// Max displacement over points that stay within the R-ball; 0 when no
/// point does (sup over the empty set).
pub fn action_seminorm(action: &GroupAction, g: usize, radius: f64) -> f64 {
    let space = action.space();
    let p = space.basepoint();
    let mut worst = 0.0_f64;
    for x in 0..space.n() {
        let gx = action.apply(g, x);
        if space.dist(p, x) < radius && space.dist(p, gx) < radius {
            worst = worst.max(space.dist(x, gx));
        }
    }
    worst
}

/// `d_R(g, h) = ‖g h⁻¹‖_R` (right-invariant), or `‖g⁻¹ h‖_R` for the left
/// variant.
pub fn action_pseudometric_with(
    action: &GroupAction,
    g: usize,
    h: usize,
    radius: f64,
    invariance: Invariance,
) -> f64 {
    let group = action.group();
    let combined = match invariance {
        Invariance::Right => group.mul(g, group.inv(h)),
        Invariance::Left => group.mul(group.inv(g), h),
    };
    action_seminorm(action, combined, radius)
}

pub fn action_pseudometric(action: &GroupAction, g: usize, h: usize, radius: f64) -> f64 {
    action_pseudometric_with(action, g, h, radius, Invariance::Right)
}

/// All seminorm values at one radius, built in parallel over elements.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeminormTable {
    pub radius: f64,
    pub values: Vec<f64>,
}

pub fn seminorm_table(action: &GroupAction, radius: f64) -> SeminormTable {
    let values = parallel::map_indexed(action.group().order(), |g| {
        action_seminorm(action, g, radius)
    });
    SeminormTable { radius, values }
}

/// Regime of the pseudosemimetric at one radius: separation, triangle
/// inequality, and witnesses for the two possible product inequalities
/// (multiplicative as stated, subadditive as the natural precursor).
/// Witnesses are reported, never asserted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub radius: f64,
    pub separates: bool,
    pub separation_witness: Option<usize>,
    pub triangle: bool,
    pub triangle_witness: Option<(usize, usize, usize)>,
    pub multiplicative_failure: Option<(usize, usize)>,
    pub subadditive_failure: Option<(usize, usize)>,
}

pub fn metric_regime(action: &GroupAction, radius: f64) -> RegimeReport {
    let order = action.group().order();
    let table = seminorm_table(action, radius);

    let separation_witness = (1..order).find(|&g| table.values[g] == 0.0);
    let mut triangle_witness = None;
    'tri: for a in 0..order {
        for b in 0..order {
            for c in 0..order {
                let ac = action_pseudometric(action, a, c, radius);
                let ab = action_pseudometric(action, a, b, radius);
                let bc = action_pseudometric(action, b, c, radius);
                if ac > ab + bc + 1e-12 {
                    triangle_witness = Some((a, b, c));
                    break 'tri;
                }
            }
        }
    }
    let mut multiplicative_failure = None;
    let mut subadditive_failure = None;
    for g in 0..order {
        for h in 0..order {
            let gh = action.group().mul(g, h);
            let ngh = table.values[gh];
            if multiplicative_failure.is_none() && ngh > table.values[g] * table.values[h] + 1e-12 {
                multiplicative_failure = Some((g, h));
            }
            if subadditive_failure.is_none() && ngh > table.values[g] + table.values[h] + 1e-12 {
                subadditive_failure = Some((g, h));
            }
        }
    }
    RegimeReport {
        radius,
        separates: separation_witness.is_none(),
        separation_witness,
        triangle: triangle_witness.is_none(),
        triangle_witness,
        multiplicative_failure,
        subadditive_failure,
    }
}

/// A μ-net: members cover the space within < μ while staying pairwise
/// ≥ μ apart (equivalently, the open μ/2-balls are disjoint).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Net {
    pub mu: f64,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, Error)]
pub enum NetError {
    #[error("mu must be positive")]
    NonPositiveMu,
    #[error("net is not valid for this space")]
    InvalidNet,
}

/// Greedy maximal μ-separated set: scan points in index order and admit a
/// point iff it is ≥ μ from all admitted points. Maximality gives the
/// covering property.
pub fn minimal_net(space: &FiniteMetricSpace, mu: f64) -> Result<Net, NetError> {
    if !(mu > 0.0) {
        return Err(NetError::NonPositiveMu);
    }
    let mut members: Vec<usize> = Vec::new();
    for x in 0..space.n() {
        if members.iter().all(|&m| space.dist(x, m) >= mu) {
            members.push(x);
        }
    }
    Ok(Net { mu, members })
}

impl Net {
    /// Both net invariants against a space.
    pub fn is_valid_for(&self, space: &FiniteMetricSpace) -> bool {
        let covering = (0..space.n())
            .all(|x| self.members.iter().any(|&m| space.dist(x, m) < self.mu));
        let separation = self.members.iter().enumerate().all(|(i, &a)| {
            self.members[i + 1..]
                .iter()
                .all(|&b| space.dist(a, b) >= self.mu)
        });
        covering && separation
    }
}

/// `max over points x of |{ m ∈ net : ball(x, μ) ∩ ball(m, μ) ≠ ∅ }|`,
/// the empirical covering constant of the net.
pub fn covering_multiplicity(space: &FiniteMetricSpace, net: &Net) -> Result<usize, NetError> {
    // The count is well defined for any covering family, separated or not.
    let covers = (0..space.n())
        .all(|x| net.members.iter().any(|&m| space.dist(x, m) < net.mu));
    if !covers || net.members.iter().any(|&m| m >= space.n()) {
        return Err(NetError::InvalidNet);
    }
    let balls: Vec<Vec<usize>> = net
        .members
        .iter()
        .map(|&m| space.ball(m, net.mu))
        .collect();
    let count = (0..space.n())
        .map(|x| {
            let bx = space.ball(x, net.mu);
            balls
                .iter()
                .filter(|bm| bm.iter().any(|y| bx.contains(y)))
                .count()
        })
        .max()
        .unwrap_or(0);
    Ok(count)
}
