//! Almost-homomorphism defect, the snap to a nearby exact homomorphism,
//! and kernel analysis: which symmetries survive the limit and which are
//! lost.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{FiniteGroup, GroupAction};
use crate::lie::{geodesic_distance, Rotation};
use crate::parallel;

/// The factor of the nearby-homomorphism guarantee: a continuous group
/// homomorphism exists within 1.36·q of an almost homomorphism with
/// defect q, for small q.
pub const SNAP_FACTOR: f64 = 1.36;

/// Default defect threshold above which snapping is refused.
pub const DEFAULT_Q_MAX: f64 = 0.1;

#[derive(Debug, Clone, Error)]
pub enum SmoothingError {
    #[error("defect {q:.6} exceeds the snap threshold {q_max:.6}")]
    DefectTooLarge { q: f64, q_max: f64 },
    #[error("no homomorphism nearby: best displacement {best:.6} > 1.36 q = {limit:.6}")]
    NoHomomorphismNearby { best: f64, limit: f64 },
    #[error("the given elements are not a subgroup")]
    NotASubgroup,
    #[error("images must all be rotations of one dimension, or all finite")]
    MixedImages,
    #[error("snapping into SO({0}) is not supported (only n = 2, 3)")]
    UnsupportedTarget(usize),
    #[error("map must be total on the source group")]
    PartialMap,
}

/// A (not necessarily homomorphic) map from a finite group into a finite
/// group or a rotation group, with the distance its target carries.
#[derive(Debug, Clone)]
pub struct AlmostHomomorphism {
    pub source: FiniteGroup,
    pub images: MapImages,
}

#[derive(Debug, Clone)]
pub enum MapImages {
    /// Finite target with the discrete metric scaled by `metric_scale`.
    Finite {
        target: FiniteGroup,
        metric_scale: f64,
        images: Vec<usize>,
    },
    /// Rotation target with the normalized bi-invariant distance.
    Rotations(Vec<Rotation>),
}

impl AlmostHomomorphism {
    fn len(&self) -> usize {
        match &self.images {
            MapImages::Finite { images, .. } => images.len(),
            MapImages::Rotations(images) => images.len(),
        }
    }

    fn check_total(&self) -> Result<(), SmoothingError> {
        if self.len() != self.source.order() {
            return Err(SmoothingError::PartialMap);
        }
        Ok(())
    }

    /// Distance between the images at two defect probes, in the target.
    fn target_distance_of_pair(&self, gh: usize, h: usize, g: usize) -> f64 {
        match &self.images {
            MapImages::Finite {
                target,
                metric_scale,
                images,
            } => {
                let probe = target.mul(images[gh], target.inv(images[h]));
                if probe == images[g] {
                    0.0
                } else {
                    *metric_scale
                }
            }
            MapImages::Rotations(images) => {
                let probe = images[gh].compose(&images[h].inverse());
                geodesic_distance(&probe, &images[g])
            }
        }
    }

    fn image_distance_to(&self, g: usize, hom: &Homomorphism) -> f64 {
        match (&self.images, hom) {
            (
                MapImages::Finite {
                    metric_scale,
                    images,
                    ..
                },
                Homomorphism::Finite { images: him, .. },
            ) => {
                if images[g] == him[g] {
                    0.0
                } else {
                    *metric_scale
                }
            }
            (MapImages::Rotations(images), Homomorphism::Torus { .. }) => {
                geodesic_distance(&images[g], &hom.rotation_image(g))
            }
            _ => f64::INFINITY,
        }
    }
}

/// Max defect `q = max over g, h of dist(map(gh)·map(h)⁻¹, map(g))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub q: f64,
    pub witness: (usize, usize),
}

pub fn homomorphism_defect(map: &AlmostHomomorphism) -> Result<DefectReport, SmoothingError> {
    map.check_total()?;
    let order = map.source.order();
    let mut q = 0.0_f64;
    let mut witness = (0, 0);
    for g in 0..order {
        for h in 0..order {
            let gh = map.source.mul(g, h);
            let d = map.target_distance_of_pair(gh, h, g);
            if d > q {
                q = d;
                witness = (g, h);
            }
        }
    }
    Ok(DefectReport { q, witness })
}

/// An exact homomorphism out of a finite group. Rotation-valued
/// homomorphisms land in a one-parameter subgroup and are stored as exact
/// rationals of a full turn, so kernels and the homomorphism law are exact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Homomorphism {
    Finite {
        source: FiniteGroup,
        target: FiniteGroup,
        images: Vec<usize>,
    },
    Torus {
        source: FiniteGroup,
        /// Ambient dimension: 2 for SO(2), 3 for rotations about `axis`.
        n: usize,
        axis: Option<[f64; 3]>,
        /// Image of element g is the rotation by 2π·numerators[g]/denominator.
        numerators: Vec<i64>,
        denominator: i64,
    },
}

impl Homomorphism {
    pub fn source(&self) -> &FiniteGroup {
        match self {
            Homomorphism::Finite { source, .. } => source,
            Homomorphism::Torus { source, .. } => source,
        }
    }

    /// The rotation realizing the image of `g` (torus homomorphisms only).
    pub fn rotation_image(&self, g: usize) -> Rotation {
        match self {
            Homomorphism::Torus {
                n,
                axis,
                numerators,
                denominator,
                ..
            } => {
                let angle =
                    2.0 * std::f64::consts::PI * numerators[g] as f64 / *denominator as f64;
                match (n, axis) {
                    (2, _) => Rotation::so2(angle),
                    (3, Some(axis)) => Rotation::so3_axis_angle(*axis, angle),
                    _ => unreachable!("torus homomorphism without a realizable carrier"),
                }
            }
            Homomorphism::Finite { .. } => {
                unreachable!("finite-target homomorphism has no rotation image")
            }
        }
    }

    /// Verifies the exact homomorphism law, independently of how the
    /// homomorphism was found.
    pub fn satisfies_law(&self) -> bool {
        match self {
            Homomorphism::Finite {
                source,
                target,
                images,
            } => {
                images[0] == 0
                    && (0..source.order()).all(|g| {
                        (0..source.order()).all(|h| {
                            images[source.mul(g, h)] == target.mul(images[g], images[h])
                        })
                    })
            }
            Homomorphism::Torus {
                source,
                numerators,
                denominator,
                ..
            } => {
                numerators[0] == 0
                    && (0..source.order()).all(|g| {
                        (0..source.order()).all(|h| {
                            (numerators[source.mul(g, h)] - numerators[g] - numerators[h])
                                .rem_euclid(*denominator)
                                == 0
                        })
                    })
            }
        }
    }

    /// Elements mapped to the identity.
    pub fn kernel_elements(&self) -> Vec<usize> {
        match self {
            Homomorphism::Finite { source, images, .. } => (0..source.order())
                .filter(|&g| images[g] == 0)
                .collect(),
            Homomorphism::Torus {
                source,
                numerators,
                denominator,
                ..
            } => (0..source.order())
                .filter(|&g| numerators[g].rem_euclid(*denominator) == 0)
                .collect(),
        }
    }

    /// Number of distinct images.
    pub fn image_size(&self) -> usize {
        match self {
            Homomorphism::Finite { images, .. } => {
                let mut v = images.clone();
                v.sort_unstable();
                v.dedup();
                v.len()
            }
            Homomorphism::Torus {
                numerators,
                denominator,
                ..
            } => {
                let mut v: Vec<i64> = numerators.iter().map(|k| k.rem_euclid(*denominator)).collect();
                v.sort_unstable();
                v.dedup();
                v.len()
            }
        }
    }
}

/// Result of snapping an almost homomorphism to the nearest exact one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnapResult {
    pub hom: Homomorphism,
    /// Max distance from the input map, over all source elements.
    pub displacement: f64,
    pub q: f64,
    /// displacement ≤ 1.36 · q.
    pub bound_check: bool,
}

/// Snaps to the exact homomorphism minimizing the uniform displacement to
/// the input map.
///
/// Candidates come from generator images of finite order: complete for
/// finite targets and for SO(2); for SO(3) the search runs over maximal
/// torus slices whose axes are read off the input images. Ties on the
/// uniform displacement break by total displacement, then image order.
pub fn snap_to_homomorphism(
    map: &AlmostHomomorphism,
    q_max: f64,
) -> Result<SnapResult, SmoothingError> {
    map.check_total()?;
    let q = homomorphism_defect(map)?.q;
    if q > q_max {
        return Err(SmoothingError::DefectTooLarge { q, q_max });
    }
    let candidates = match &map.images {
        MapImages::Finite { target, .. } => enumerate_finite_homs(&map.source, target),
        MapImages::Rotations(images) => {
            let n = images.first().map(|r| r.n()).unwrap_or(0);
            if images.iter().any(|r| r.n() != n) {
                return Err(SmoothingError::MixedImages);
            }
            match n {
                2 => enumerate_torus_homs(&map.source, 2, None),
                3 => {
                    let mut homs = Vec::new();
                    for axis in candidate_axes(images) {
                        homs.extend(enumerate_torus_homs(&map.source, 3, Some(axis)));
                    }
                    homs
                }
                other => return Err(SmoothingError::UnsupportedTarget(other)),
            }
        }
    };

    let order = map.source.order();
    let scored = parallel::map_collect(&candidates, |hom| {
        let per_element: Vec<f64> = (0..order).map(|g| map.image_distance_to(g, hom)).collect();
        let max = per_element.iter().copied().fold(0.0_f64, f64::max);
        let sum: f64 = per_element.iter().sum();
        (max, sum)
    });
    let best_idx = (0..candidates.len())
        .min_by(|&a, &b| {
            scored[a]
                .0
                .total_cmp(&scored[b].0)
                .then(scored[a].1.total_cmp(&scored[b].1))
                .then(a.cmp(&b))
        })
        .expect("candidate set is nonempty (contains the trivial homomorphism)");
    let (displacement, _) = scored[best_idx];
    let limit = SNAP_FACTOR * q;
    if displacement > limit + 1e-12 {
        return Err(SmoothingError::NoHomomorphismNearby {
            best: displacement,
            limit,
        });
    }
    let hom = candidates[best_idx].clone();
    debug_assert!(hom.satisfies_law());
    Ok(SnapResult {
        hom,
        displacement,
        q,
        bound_check: displacement <= limit + 1e-12,
    })
}

/// All homomorphisms source → target (finite target), by generator-image
/// backtracking with closure propagation. Candidate images of a generator
/// must have order dividing the generator's.
pub fn enumerate_finite_homs(source: &FiniteGroup, target: &FiniteGroup) -> Vec<Homomorphism> {
    let gens = source.generating_set();
    let gens = if gens.is_empty() { vec![0] } else { gens };
    let mut out = Vec::new();
    let mut assignment = vec![0usize; gens.len()];
    backtrack_finite(source, target, &gens, 0, &mut assignment, &mut out);
    out
}

fn backtrack_finite(
    source: &FiniteGroup,
    target: &FiniteGroup,
    gens: &[usize],
    depth: usize,
    assignment: &mut Vec<usize>,
    out: &mut Vec<Homomorphism>,
) {
    if depth == gens.len() {
        if let Some(images) = extend_hom(source, gens, assignment, |a, b| Some(target.mul(a, b)), 0)
        {
            out.push(Homomorphism::Finite {
                source: source.clone(),
                target: target.clone(),
                images,
            });
        }
        return;
    }
    let gen_order = source.element_order(gens[depth]);
    for cand in 0..target.order() {
        if gen_order % target.element_order(cand) == 0 {
            assignment[depth] = cand;
            backtrack_finite(source, target, gens, depth + 1, assignment, out);
        }
    }
}

/// All homomorphisms into the cyclic subgroup of order E = exponent(source)
/// of a fixed maximal torus, in exact integer arithmetic.
pub fn enumerate_torus_homs(
    source: &FiniteGroup,
    n: usize,
    axis: Option<[f64; 3]>,
) -> Vec<Homomorphism> {
    let e = source.exponent() as i64;
    let gens = source.generating_set();
    let gens = if gens.is_empty() { vec![0] } else { gens };
    let mut out = Vec::new();
    let mut assignment = vec![0i64; gens.len()];
    backtrack_torus(source, e, n, axis, &gens, 0, &mut assignment, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn backtrack_torus(
    source: &FiniteGroup,
    e: i64,
    n: usize,
    axis: Option<[f64; 3]>,
    gens: &[usize],
    depth: usize,
    assignment: &mut Vec<i64>,
    out: &mut Vec<Homomorphism>,
) {
    if depth == gens.len() {
        if let Some(numerators) =
            extend_hom(source, gens, assignment, |a, b| Some((a + b).rem_euclid(e)), 0i64)
        {
            out.push(Homomorphism::Torus {
                source: source.clone(),
                n,
                axis,
                numerators,
                denominator: e,
            });
        }
        return;
    }
    let gen_order = source.element_order(gens[depth]) as i64;
    // Images of order dividing ord(gen): multiples of E / ord(gen).
    let step = e / gen_order;
    let mut k = 0;
    while k < e {
        assignment[depth] = k;
        backtrack_torus(source, e, n, axis, gens, depth + 1, assignment, out);
        k += step;
    }
}

/// Propagates generator images through the Cayley graph; returns the total
/// image table iff every element gets a single consistent value.
fn extend_hom<T: Copy + PartialEq>(
    source: &FiniteGroup,
    gens: &[usize],
    gen_images: &[T],
    mul: impl Fn(T, T) -> Option<T>,
    identity: T,
) -> Option<Vec<T>> {
    let order = source.order();
    let mut images: Vec<Option<T>> = vec![None; order];
    images[0] = Some(identity);
    let mut queue = vec![0usize];
    while let Some(x) = queue.pop() {
        let ix = images[x].unwrap();
        for (&g, &ig) in gens.iter().zip(gen_images) {
            let xg = source.mul(x, g);
            let value = mul(ix, ig)?;
            match images[xg] {
                None => {
                    images[xg] = Some(value);
                    queue.push(xg);
                }
                Some(existing) if existing != value => return None,
                _ => {}
            }
        }
    }
    let images: Option<Vec<T>> = images.into_iter().collect();
    let images = images?;
    // Closure over generators reaches everything; verify the full law once.
    for g in 0..order {
        for h in 0..order {
            if mul(images[g], images[h])? != images[source.mul(g, h)] {
                return None;
            }
        }
    }
    Some(images)
}

/// Rotation axes appearing among the input images (from their logarithms),
/// plus the z-axis fallback, in element order.
fn candidate_axes(images: &[Rotation]) -> Vec<[f64; 3]> {
    let mut axes: Vec<[f64; 3]> = Vec::new();
    for r in images {
        let (log, _) = crate::lie::principal_log(r);
        let v = [log[(2, 1)], log[(0, 2)], log[(1, 0)]];
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm > 1e-8 {
            let unit = [v[0] / norm, v[1] / norm, v[2] / norm];
            if !axes
                .iter()
                .any(|a| (a[0] - unit[0]).abs() + (a[1] - unit[1]).abs() + (a[2] - unit[2]).abs() < 1e-9)
            {
                axes.push(unit);
            }
        }
    }
    axes.push([0.0, 0.0, 1.0]);
    axes
}

/// The kernel as a validated group with its embedding into the source;
/// normality is verified.
pub fn kernel(hom: &Homomorphism) -> Result<(FiniteGroup, Vec<usize>), SmoothingError> {
    let source = hom.source();
    let elements = hom.kernel_elements();
    let (group, embedding) = source
        .subgroup_group(&elements)
        .ok_or(SmoothingError::NotASubgroup)?;
    for g in 0..source.order() {
        for &h in &embedding {
            let conj = source.mul(source.mul(g, h), source.inv(g));
            if !embedding.contains(&conj) {
                return Err(SmoothingError::NotASubgroup);
            }
        }
    }
    Ok((group, embedding))
}

/// Monomorphism check with size bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonomorphismReport {
    pub injective: bool,
    pub kernel_order: usize,
    pub source_order: usize,
    pub image_size: usize,
    /// For finite targets: (image size, target order, image divides target).
    pub divisibility: Option<(usize, usize, bool)>,
}

pub fn check_monomorphism(hom: &Homomorphism) -> Result<MonomorphismReport, SmoothingError> {
    let (k, _) = kernel(hom)?;
    let image_size = hom.image_size();
    let divisibility = match hom {
        Homomorphism::Finite { target, .. } => {
            Some((image_size, target.order(), target.order() % image_size == 0))
        }
        Homomorphism::Torus { .. } => None,
    };
    Ok(MonomorphismReport {
        injective: k.order() == 1,
        kernel_order: k.order(),
        source_order: hom.source().order(),
        image_size,
        divisibility,
    })
}

/// Max over points of the diameter of the subgroup orbit through them.
pub fn kernel_orbit_diameter(
    action: &GroupAction,
    subgroup: &[usize],
) -> Result<f64, SmoothingError> {
    if !action.group().is_subgroup(subgroup) {
        return Err(SmoothingError::NotASubgroup);
    }
    let space = action.space();
    let mut worst = 0.0_f64;
    for x in 0..space.n() {
        for &a in subgroup {
            for &b in subgroup {
                worst = worst.max(space.dist(action.apply(a, x), action.apply(b, x)));
            }
        }
    }
    Ok(worst)
}
