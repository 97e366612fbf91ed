//! Elements of SO(n) with the bi-invariant geometry, normalized so the
//! group diameter is at most 1.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Frobenius tolerance for orthogonality.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Eigenvalue-at-minus-one tolerance for the cut-locus flag.
pub const CUT_LOCUS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Error)]
pub enum RotationError {
    #[error("matrix is not square of size {0}")]
    NotSquare(usize),
    #[error("matrix is not orthogonal within tolerance (defect {0:.3e})")]
    NotOrthogonal(f64),
    #[error("determinant is not positive")]
    NegativeDeterminant,
    #[error("weights must be nonnegative and sum to 1 within 1e-12")]
    BadWeights,
    #[error("points too spread: max pairwise distance {spread:.6} >= limit {limit:.6}")]
    PointsTooSpread { spread: f64, limit: f64 },
    #[error("mean iteration did not converge within {0} steps")]
    NoConvergence(usize),
    #[error("no net point within nu of the query")]
    NoCoverage,
    #[error("net points are closer than the bump radius")]
    NetTooClose,
    #[error("nets incompatible: {0}")]
    NetIncompatible(String),
}

/// An element of SO(n), stored as the full matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    n: usize,
    matrix: Vec<Vec<f64>>,
}

impl Rotation {
    pub fn try_new(matrix: Vec<Vec<f64>>) -> Result<Self, RotationError> {
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|row| row.len() != n) {
            return Err(RotationError::NotSquare(n));
        }
        let m = to_dmatrix(&matrix);
        let defect = (m.transpose() * &m - DMatrix::identity(n, n)).norm();
        if defect > ORTHOGONALITY_TOL {
            return Err(RotationError::NotOrthogonal(defect));
        }
        if m.determinant() <= 0.0 {
            return Err(RotationError::NegativeDeterminant);
        }
        Ok(Rotation { n, matrix })
    }

    pub(crate) fn from_dmatrix(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| m[(i, j)]).collect())
            .collect();
        Rotation { n, matrix }
    }

    pub fn identity(n: usize) -> Self {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Rotation { n, matrix }
    }

    /// Planar rotation by `angle` (only element type in SO(2)).
    pub fn so2(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Rotation {
            n: 2,
            matrix: vec![vec![c, -s], vec![s, c]],
        }
    }

    /// Rotation by `angle` about a (not necessarily unit) axis in SO(3).
    pub fn so3_axis_angle(axis: [f64; 3], angle: f64) -> Self {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        assert!(norm > 0.0, "axis must be nonzero");
        let (x, y, z) = (axis[0] / norm, axis[1] / norm, axis[2] / norm);
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        Rotation {
            n: 3,
            matrix: vec![
                vec![t * x * x + c, t * x * y - s * z, t * x * z + s * y],
                vec![t * x * y + s * z, t * y * y + c, t * y * z - s * x],
                vec![t * x * z - s * y, t * y * z + s * x, t * z * z + c],
            ],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Vec<Vec<f64>> {
        &self.matrix
    }

    pub(crate) fn dmatrix(&self) -> DMatrix<f64> {
        to_dmatrix(&self.matrix)
    }

    pub fn compose(&self, other: &Rotation) -> Rotation {
        assert_eq!(self.n, other.n);
        Rotation::from_dmatrix(&(self.dmatrix() * other.dmatrix()))
    }

    pub fn inverse(&self) -> Rotation {
        Rotation::from_dmatrix(&self.dmatrix().transpose())
    }

    /// The rotation angle of an SO(2) element in (-π, π].
    pub fn so2_angle(&self) -> f64 {
        debug_assert_eq!(self.n, 2);
        self.matrix[1][0].atan2(self.matrix[0][0])
    }
}

fn to_dmatrix(matrix: &[Vec<f64>]) -> DMatrix<f64> {
    let n = matrix.len();
    DMatrix::from_fn(n, n, |i, j| matrix[i][j])
}

/// Normalization constant: the diameter of SO(n) in the Frobenius metric on
/// logarithms is `π·sqrt(2·floor(n/2))`, so dividing by it gives diameter 1.
pub fn diameter_normalizer(n: usize) -> f64 {
    std::f64::consts::PI * (2.0 * (n / 2) as f64).sqrt()
}

/// Principal logarithm of a rotation as a skew-symmetric matrix, plus a
/// flag set when some rotation angle is within tolerance of π (the cut
/// locus, where the logarithm stops being unique).
pub fn principal_log(r: &Rotation) -> (DMatrix<f64>, bool) {
    let n = r.n;
    match n {
        1 => (DMatrix::zeros(1, 1), false),
        2 => {
            let theta = r.so2_angle();
            let mut s = DMatrix::zeros(2, 2);
            s[(0, 1)] = -theta;
            s[(1, 0)] = theta;
            (s, (theta.abs() - std::f64::consts::PI).abs() < CUT_LOCUS_TOL)
        }
        3 => log_so3(r),
        _ => log_schur(r),
    }
}

fn log_so3(r: &Rotation) -> (DMatrix<f64>, bool) {
    let m = &r.matrix;
    let trace = m[0][0] + m[1][1] + m[2][2];
    let cos_theta = ((trace - 1.0) / 2.0).clamp(-1.0, 1.0);
    let theta = cos_theta.acos();
    let mut s = DMatrix::zeros(3, 3);
    if theta < 1e-12 {
        return (s, false);
    }
    let at_cut = std::f64::consts::PI - theta < CUT_LOCUS_TOL;
    let (ax, ay, az);
    if !at_cut {
        let scale = theta / (2.0 * theta.sin());
        ax = scale * (m[2][1] - m[1][2]);
        ay = scale * (m[0][2] - m[2][0]);
        az = scale * (m[1][0] - m[0][1]);
    } else {
        // Near θ = π the skew part degenerates; recover the axis from the
        // symmetric part (R + I)/2 ≈ aaᵀ and keep the sign from the skew part.
        let bxx = (m[0][0] + 1.0) / 2.0;
        let byy = (m[1][1] + 1.0) / 2.0;
        let bzz = (m[2][2] + 1.0) / 2.0;
        let mut a = if bxx >= byy && bxx >= bzz {
            let x = bxx.max(0.0).sqrt();
            [x, (m[0][1] + m[1][0]) / (4.0 * x), (m[0][2] + m[2][0]) / (4.0 * x)]
        } else if byy >= bzz {
            let y = byy.max(0.0).sqrt();
            [(m[0][1] + m[1][0]) / (4.0 * y), y, (m[1][2] + m[2][1]) / (4.0 * y)]
        } else {
            let z = bzz.max(0.0).sqrt();
            [(m[0][2] + m[2][0]) / (4.0 * z), (m[1][2] + m[2][1]) / (4.0 * z), z]
        };
        let norm = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
        for v in a.iter_mut() {
            *v /= norm;
        }
        let sign = a[0] * (m[2][1] - m[1][2]) + a[1] * (m[0][2] - m[2][0])
            + a[2] * (m[1][0] - m[0][1]);
        let s = if sign < 0.0 { -theta } else { theta };
        ax = s * a[0];
        ay = s * a[1];
        az = s * a[2];
    }
    s[(0, 1)] = -az;
    s[(0, 2)] = ay;
    s[(1, 0)] = az;
    s[(1, 2)] = -ax;
    s[(2, 0)] = -ay;
    s[(2, 1)] = ax;
    (s, at_cut)
}

fn log_schur(r: &Rotation) -> (DMatrix<f64>, bool) {
    let n = r.n;
    let schur = r.dmatrix().schur();
    let (q, t) = schur.unpack();
    // The real Schur form of an orthogonal matrix is block diagonal with
    // 2x2 rotation blocks and ±1 entries; -1 entries pair up into π-blocks.
    let mut s = DMatrix::zeros(n, n);
    let mut at_cut = false;
    let mut minus_ones: Vec<usize> = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)].abs() > 1e-8 {
            let cos = (t[(i, i)] + t[(i + 1, i + 1)]) / 2.0;
            let sin = (t[(i + 1, i)] - t[(i, i + 1)]) / 2.0;
            let theta = sin.atan2(cos);
            s[(i, i + 1)] = -theta;
            s[(i + 1, i)] = theta;
            if (theta.abs() - std::f64::consts::PI).abs() < CUT_LOCUS_TOL {
                at_cut = true;
            }
            i += 2;
        } else {
            if t[(i, i)] < 0.0 {
                minus_ones.push(i);
            }
            i += 1;
        }
    }
    // det +1 makes the count even; each pair is a rotation by π.
    for pair in minus_ones.chunks(2) {
        if let [a, b] = *pair {
            s[(a, b)] = -std::f64::consts::PI;
            s[(b, a)] = std::f64::consts::PI;
            at_cut = true;
        }
    }
    (&q * s * q.transpose(), at_cut)
}

/// Exponential of a skew-symmetric matrix back into SO(n), with a polar
/// re-projection to keep orthogonality under iteration drift.
pub fn skew_exp(s: &DMatrix<f64>) -> Rotation {
    let n = s.nrows();
    let raw = match n {
        2 => {
            let theta = s[(1, 0)];
            return Rotation::so2(theta);
        }
        3 => {
            let ax = s[(2, 1)];
            let ay = s[(0, 2)];
            let az = s[(1, 0)];
            let theta = (ax * ax + ay * ay + az * az).sqrt();
            if theta < 1e-300 {
                return Rotation::identity(3);
            }
            return Rotation::so3_axis_angle([ax, ay, az], theta);
        }
        _ => s.exp(),
    };
    reproject(&raw)
}

/// Projects a near-rotation back onto SO(n) via the polar factor.
pub fn reproject(m: &DMatrix<f64>) -> Rotation {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("svd with u");
    let vt = svd.v_t.expect("svd with v_t");
    let mut r = u * vt;
    if r.determinant() < 0.0 {
        // Flip the last singular direction; inputs near SO(n) never need it
        // but the projection should stay total.
        let n = r.nrows();
        let mut flip = DMatrix::identity(n, n);
        flip[(n - 1, n - 1)] = -1.0;
        r *= flip;
    }
    Rotation::from_dmatrix(&r)
}

/// Geodesic distance induced by the bi-invariant metric, normalized to
/// diameter ≤ 1: `‖log(AᵀB)‖_F / (π·sqrt(2·floor(n/2)))`. The flag is set
/// when AᵀB lies at the cut locus (eigenvalue -1): the distance is still
/// returned but the minimizing geodesic is not unique.
pub fn geodesic_distance_flagged(a: &Rotation, b: &Rotation) -> (f64, bool) {
    assert_eq!(a.n, b.n, "dimension mismatch");
    match a.n {
        1 => (0.0, false),
        // Allocation-free closed forms: ‖log‖_F = √2·θ and the normalizer
        // is √2·π, so the distance is θ/π with θ the rotation angle of AᵀB.
        2 => {
            let diff = (b.so2_angle() - a.so2_angle()).rem_euclid(2.0 * std::f64::consts::PI);
            let theta = diff.min(2.0 * std::f64::consts::PI - diff);
            (
                theta / std::f64::consts::PI,
                (theta - std::f64::consts::PI).abs() < CUT_LOCUS_TOL,
            )
        }
        3 => {
            // Relative rotation AᵀB without allocation; the angle comes
            // from atan2(sin, cos) which stays accurate near 0 and π.
            let mut rel = [[0.0_f64; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    rel[i][j] = (0..3).map(|k| a.matrix[k][i] * b.matrix[k][j]).sum();
                }
            }
            let cos = (rel[0][0] + rel[1][1] + rel[2][2] - 1.0) / 2.0;
            let vx = (rel[2][1] - rel[1][2]) / 2.0;
            let vy = (rel[0][2] - rel[2][0]) / 2.0;
            let vz = (rel[1][0] - rel[0][1]) / 2.0;
            let sin = (vx * vx + vy * vy + vz * vz).sqrt();
            let theta = sin.atan2(cos);
            (
                theta / std::f64::consts::PI,
                std::f64::consts::PI - theta < CUT_LOCUS_TOL,
            )
        }
        _ => {
            let rel = a.inverse().compose(b);
            let (log, at_cut) = principal_log(&rel);
            (log.norm() / diameter_normalizer(a.n), at_cut)
        }
    }
}

pub fn geodesic_distance(a: &Rotation, b: &Rotation) -> f64 {
    geodesic_distance_flagged(a, b).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn random_so3(rng: &mut crate::metric::SplitMix64) -> Rotation {
        let axis = [
            rng.next_range(-1.0, 1.0),
            rng.next_range(-1.0, 1.0),
            rng.next_range(-1.0, 1.0),
        ];
        let angle = rng.next_range(-PI, PI);
        Rotation::so3_axis_angle(axis, angle)
    }

    #[test]
    fn validation_rejects_non_orthogonal_and_reflections() {
        assert!(Rotation::try_new(vec![vec![1.0, 0.1], vec![0.0, 1.0]]).is_err());
        assert!(Rotation::try_new(vec![vec![1.0, 0.0], vec![0.0, -1.0]]).is_err());
        assert!(Rotation::try_new(vec![vec![0.0, -1.0], vec![1.0, 0.0]]).is_ok());
    }

    #[test]
    fn distance_to_self_is_zero() {
        let r = Rotation::so2(0.7);
        assert_eq!(geodesic_distance(&r, &r), 0.0);
    }

    #[test]
    fn so2_distance_is_normalized_angle_difference() {
        // ‖log‖_F = √2·|Δθ| and the normalizer is √2·π, so d = |Δθ|/π.
        for (a, b) in [(0.3, 1.2), (-2.9, 2.8), (0.0, PI)] {
            let d = geodesic_distance(&Rotation::so2(a), &Rotation::so2(b));
            let diff = (a - b).rem_euclid(2.0 * PI);
            let arc = diff.min(2.0 * PI - diff);
            assert_relative_eq!(d, arc / PI, epsilon = 1e-12);
        }
    }

    #[test]
    fn so3_distance_is_normalized_rotation_angle() {
        let r = Rotation::so3_axis_angle([0.0, 0.0, 1.0], 0.9);
        let d = geodesic_distance(&Rotation::identity(3), &r);
        assert_relative_eq!(d, 0.9 / PI, epsilon = 1e-12);
    }

    #[test]
    fn bi_invariance_holds_numerically() {
        let mut rng = crate::metric::SplitMix64::new(11);
        for _ in 0..20 {
            let a = random_so3(&mut rng);
            let b = random_so3(&mut rng);
            let g = random_so3(&mut rng);
            let d = geodesic_distance(&a, &b);
            let dl = geodesic_distance(&g.compose(&a), &g.compose(&b));
            let dr = geodesic_distance(&a.compose(&g), &b.compose(&g));
            assert_relative_eq!(d, dl, epsilon = 1e-10);
            assert_relative_eq!(d, dr, epsilon = 1e-10);
        }
    }

    #[test]
    fn log_exp_round_trip() {
        let mut rng = crate::metric::SplitMix64::new(17);
        for _ in 0..20 {
            let r = random_so3(&mut rng);
            let (log, _) = principal_log(&r);
            assert_relative_eq!((&log + log.transpose()).norm(), 0.0, epsilon = 1e-9);
            let back = skew_exp(&log);
            assert_relative_eq!(
                (r.dmatrix() - back.dmatrix()).norm(),
                0.0,
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn cut_locus_is_flagged_and_distance_still_returned() {
        let r = Rotation::so2(PI);
        let (d, flagged) = geodesic_distance_flagged(&Rotation::identity(2), &r);
        assert!(flagged);
        assert_relative_eq!(d, 1.0, epsilon = 1e-12);

        let r3 = Rotation::so3_axis_angle([1.0, 2.0, -0.5], PI);
        let (d3, flagged3) = geodesic_distance_flagged(&Rotation::identity(3), &r3);
        assert!(flagged3);
        assert_relative_eq!(d3, 1.0, epsilon = 1e-9);
        // The log at the cut locus still exponentiates back to the rotation.
        let (log, _) = principal_log(&r3);
        let back = skew_exp(&log);
        assert_relative_eq!((r3.dmatrix() - back.dmatrix()).norm(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn schur_path_handles_so4() {
        let mut m = vec![vec![0.0; 4]; 4];
        let (t1, t2): (f64, f64) = (0.6, 2.2);
        m[0][0] = t1.cos();
        m[0][1] = -t1.sin();
        m[1][0] = t1.sin();
        m[1][1] = t1.cos();
        m[2][2] = t2.cos();
        m[2][3] = -t2.sin();
        m[3][2] = t2.sin();
        m[3][3] = t2.cos();
        let r = Rotation::try_new(m).unwrap();
        let (log, at_cut) = principal_log(&r);
        assert!(!at_cut);
        let expected = (2.0 * t1 * t1 + 2.0 * t2 * t2).sqrt() / diameter_normalizer(4);
        assert_relative_eq!(
            geodesic_distance(&Rotation::identity(4), &r),
            expected,
            epsilon = 1e-9
        );
        let back = skew_exp(&log);
        assert_relative_eq!((r.dmatrix() - back.dmatrix()).norm(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn so4_with_minus_one_pair_is_cut_locus() {
        let mut m = vec![vec![0.0; 4]; 4];
        m[0][0] = -1.0;
        m[1][1] = -1.0;
        m[2][2] = 1.0;
        m[3][3] = 1.0;
        let r = Rotation::try_new(m).unwrap();
        let (log, at_cut) = principal_log(&r);
        assert!(at_cut);
        let back = skew_exp(&log);
        assert_relative_eq!((r.dmatrix() - back.dmatrix()).norm(), 0.0, epsilon = 1e-8);
    }
}
