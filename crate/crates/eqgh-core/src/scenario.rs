//! Scenario generators for convergent sequences of pointed group metric
//! spaces, the end-to-end convergence pipeline (certificates, ψ extraction,
//! continuification, defect, snap, kernels), and report assembly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::epgh::{
    epsilon_grid, verify_approximation, ApproximationTriple, CertificateReport,
};
use crate::groups::{cyclic_shift_action, isometry_group_bounded, FiniteGroup, GroupAction};
use crate::lie::{continuify, ComConfig, Rotation, TargetNet};
use crate::metric::{
    gh_distance_bruteforce_bounded, validate_space, FiniteMetricSpace, DEFAULT_GH_SIZE_LIMIT,
};
use crate::smoothing::{
    homomorphism_defect, kernel, kernel_orbit_diameter, snap_to_homomorphism,
    AlmostHomomorphism, MapImages, SnapResult, DEFAULT_Q_MAX,
};

#[derive(Debug, Clone, Error)]
pub enum ScenarioError {
    #[error("p = {p} does not divide n = {n}")]
    DivisibilityError { n: usize, p: usize },
    #[error("need at least 3 samples per circle, got {0}")]
    TooFewPoints(usize),
}

/// n×m grid on a flat torus: first circle of circumference 2π, second of
/// circumference `c`, distances combined in ℓ². Filled from per-gap tables
/// so the ℤ_m rotation of the second factor is a bit-exact isometry.
pub fn torus_space(n: usize, m: usize, c: f64) -> FiniteMetricSpace {
    let t1: Vec<f64> = (0..=n / 2)
        .map(|a| 2.0 * std::f64::consts::PI * a as f64 / n as f64)
        .collect();
    let t2: Vec<f64> = (0..=m / 2).map(|b| c * b as f64 / m as f64).collect();
    let gap = |len: usize, i: usize, j: usize| {
        let d = (i as isize - j as isize).unsigned_abs();
        d.min(len - d)
    };
    let total = n * m;
    let mut dist = vec![vec![0.0; total]; total];
    for i1 in 0..n {
        for j1 in 0..m {
            for i2 in 0..n {
                for j2 in 0..m {
                    let a = t1[gap(n, i1, i2)];
                    let b = t2[gap(m, j1, j2)];
                    dist[i1 * m + j1][i2 * m + j2] = (a * a + b * b).sqrt();
                }
            }
        }
    }
    validate_space(dist, 0).expect("torus grid must validate")
}

/// n equally spaced circle samples with ℤ_p acting by rotation through
/// n/p steps.
pub fn gen_circle(n: usize, p: usize) -> Result<GroupAction, ScenarioError> {
    if n < 3 {
        return Err(ScenarioError::TooFewPoints(n));
    }
    if p == 0 || n % p != 0 {
        return Err(ScenarioError::DivisibilityError { n, p });
    }
    let space = crate::metric::circle_space(n);
    Ok(cyclic_shift_action(space, p, n / p).expect("circle shift action validates"))
}

/// Flat torus grid with ℤ_m rotating the second factor.
pub fn gen_collapsing_torus(n: usize, m: usize, c: f64) -> Result<GroupAction, ScenarioError> {
    if n < 3 {
        return Err(ScenarioError::TooFewPoints(n));
    }
    if m < 3 {
        return Err(ScenarioError::TooFewPoints(m));
    }
    let space = torus_space(n, m, c);
    let total = n * m;
    let perm: Vec<Vec<usize>> = (0..m)
        .map(|k| {
            (0..total)
                .map(|idx| {
                    let (i, j) = (idx / m, idx % m);
                    i * m + (j + k) % m
                })
                .collect()
        })
        .collect();
    Ok(
        crate::groups::validate_action(FiniteGroup::cyclic(m), space, perm)
            .expect("torus rotation action validates"),
    )
}

/// A named sequence of (space, action) steps with a designated finite
/// limit candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub kind: ScenarioKind,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ScenarioKind {
    /// (circle_n, ℤ_p) over the divisors of n, converging to the fully
    /// symmetric sample (circle_n, ℤ_n).
    Circle { n: usize },
    /// (torus n×m with fiber circumference 1/i, ℤ_m), collapsing onto
    /// (circle_n, trivial).
    CollapsingTorus { n: usize, m: usize },
    /// The same action at every step.
    Constant { n: usize, p: usize },
}

impl Scenario {
    pub fn circle(n: usize) -> Self {
        let divisors = divisors_of(n);
        Scenario {
            name: format!("circle{n}"),
            kind: ScenarioKind::Circle { n },
            steps: divisors.len(),
        }
    }

    pub fn collapsing_torus(n: usize, m: usize, steps: usize) -> Self {
        Scenario {
            name: format!("torus{n}x{m}"),
            kind: ScenarioKind::CollapsingTorus { n, m },
            steps,
        }
    }

    pub fn constant(n: usize, p: usize, steps: usize) -> Self {
        Scenario {
            name: format!("constant{n}_{p}"),
            kind: ScenarioKind::Constant { n, p },
            steps,
        }
    }

    /// The step actions in order, with a human-readable tag each.
    pub fn build_steps(&self) -> Result<Vec<(String, GroupAction)>, ScenarioError> {
        match self.kind {
            ScenarioKind::Circle { n } => {
                let divisors = divisors_of(n);
                divisors
                    .iter()
                    .take(self.steps)
                    .map(|&p| Ok((format!("circle{n}_Z{p}"), gen_circle(n, p)?)))
                    .collect()
            }
            ScenarioKind::CollapsingTorus { n, m } => (1..=self.steps)
                .map(|i| {
                    let c = 1.0 / i as f64;
                    Ok((
                        format!("torus{n}x{m}_c{c}"),
                        gen_collapsing_torus(n, m, c)?,
                    ))
                })
                .collect(),
            ScenarioKind::Constant { n, p } => (0..self.steps)
                .map(|_| Ok((format!("circle{n}_Z{p}"), gen_circle(n, p)?)))
                .collect(),
        }
    }

    /// The finite stand-in for the limit object.
    pub fn limit_candidate(&self) -> Result<GroupAction, ScenarioError> {
        match self.kind {
            ScenarioKind::Circle { n } => gen_circle(n, n),
            ScenarioKind::CollapsingTorus { n, .. } => gen_circle(n, 1),
            ScenarioKind::Constant { n, p } => gen_circle(n, p),
        }
    }
}

fn divisors_of(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// One row of the convergence report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRow {
    pub step: usize,
    pub description: String,
    /// Smallest grid ε at which the constructed certificates pass in both
    /// directions.
    pub epsilon: Option<f64>,
    /// Gap between ε and the previous grid candidate (one grid step).
    pub grid_step: Option<f64>,
    pub defect_q: Option<f64>,
    pub snapped: bool,
    pub injective: Option<bool>,
    pub kernel_order: Option<usize>,
    pub kernel_orbit_diameter: Option<f64>,
    pub group_order: usize,
    /// gh distance between the step and limit orbit spaces, when the
    /// instance is small enough for the brute-force oracle.
    pub orbit_gh: Option<f64>,
    pub error: Option<String>,
}

/// Certificates backing a report row, for machine re-verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepCertificates {
    pub step: usize,
    /// From the limit candidate to the step.
    pub forward: ApproximationTriple,
    pub forward_report: CertificateReport,
    /// From the step to the limit candidate.
    pub backward: ApproximationTriple,
    pub backward_report: CertificateReport,
}

/// Order-divisibility shadow of symmetry-degree semicontinuity. Symmetry
/// degree itself is identically 0 for finite groups, so group orders stand
/// in; the report flags this as a modeling choice rather than asserting the
/// original statement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub limit_isometry_order: usize,
    pub per_step: Vec<SymmetryRow>,
    pub symmetry_loss: bool,
    /// (step, kernel order) witnessing the loss, when any.
    pub loss_witness: Option<(usize, usize)>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryRow {
    pub step: usize,
    pub group_order: usize,
    pub divides_limit_isometry: bool,
    pub embedding_injective: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub scenario: String,
    pub rows: Vec<StepRow>,
    pub certificates: Vec<StepCertificates>,
    pub symmetry: SymmetryReport,
}

impl ConvergenceReport {
    /// CSV view of the rows (one line per step, stable formatting).
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "step,description,epsilon,grid_step,defect_q,snapped,injective,kernel_order,\
             kernel_orbit_diameter,group_order,orbit_gh,error\n",
        );
        for row in &self.rows {
            let fmt_f = |v: &Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            let fmt_u = |v: &Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
            let fmt_b = |v: &Option<bool>| v.map(|x| x.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                row.step,
                row.description,
                fmt_f(&row.epsilon),
                fmt_f(&row.grid_step),
                fmt_f(&row.defect_q),
                row.snapped,
                fmt_b(&row.injective),
                fmt_u(&row.kernel_order),
                fmt_f(&row.kernel_orbit_diameter),
                row.group_order,
                fmt_f(&row.orbit_gh),
                row.error.clone().unwrap_or_default(),
            ));
        }
        out
    }

    pub fn all_steps_clean(&self) -> bool {
        self.rows.iter().all(|r| r.error.is_none())
    }
}

/// Deterministic distortion-minimizing map between whole spaces: basepoint
/// to basepoint, then each point (in index order) to the candidate
/// minimizing the worst pair distortion against the assigned prefix, least
/// index on ties. Restricting it to a ball gives the `f` of a certificate.
pub fn greedy_full_map(src: &FiniteMetricSpace, dst: &FiniteMetricSpace) -> Vec<usize> {
    let mut f = vec![usize::MAX; src.n()];
    f[src.basepoint()] = dst.basepoint();
    for x in 0..src.n() {
        if x == src.basepoint() {
            continue;
        }
        let mut best = 0usize;
        let mut best_score = f64::INFINITY;
        for y in 0..dst.n() {
            let mut score = 0.0_f64;
            for (z, &fz) in f.iter().enumerate() {
                if fz != usize::MAX {
                    score = score.max((src.dist(x, z) - dst.dist(y, fz)).abs());
                }
            }
            if score < best_score {
                best_score = score;
                best = y;
            }
        }
        f[x] = best;
    }
    f
}

/// Builds the natural certificate at one ε from a full-space map:
/// f is the restriction to the ball, φ and ψ pick the per-element
/// candidate minimizing the worst equivariance defect (least index on
/// ties). Returns the triple iff it verifies.
pub fn natural_certificate(
    src: &GroupAction,
    dst: &GroupAction,
    f_full: &[usize],
    eps: f64,
) -> Option<ApproximationTriple> {
    let r = 1.0 / eps;
    let ball = src.space().ball(src.space().basepoint(), r);
    let gamma = src.gamma_r(r);
    let lambda = dst.gamma_r(r);

    let score4 = |g: usize, l: usize| -> f64 {
        let mut worst = 0.0_f64;
        for &x in &ball {
            let gx = src.apply(g, x);
            if src.space().dist(src.space().basepoint(), gx) < r {
                worst = worst
                    .max(dst.space().dist(f_full[gx], dst.apply(l, f_full[x])));
            }
        }
        worst
    };
    let phi: Vec<(usize, usize)> = gamma
        .iter()
        .map(|&g| {
            lambda
                .iter()
                .map(|&l| (l, score4(g, l)))
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
                .map(|(l, _)| (g, l))
        })
        .collect::<Option<_>>()?;

    let score5 = |l: usize, g: usize| -> f64 {
        let mut worst = 0.0_f64;
        for &x in &ball {
            let gx = src.apply(g, x);
            if src.space().dist(src.space().basepoint(), gx) < r {
                worst = worst
                    .max(dst.space().dist(f_full[gx], dst.apply(l, f_full[x])));
            }
        }
        worst
    };
    let psi: Vec<(usize, usize)> = lambda
        .iter()
        .map(|&l| {
            gamma
                .iter()
                .map(|&g| (g, score5(l, g)))
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
                .map(|(g, _)| (l, g))
        })
        .collect::<Option<_>>()?;

    let triple = ApproximationTriple {
        epsilon: eps,
        f: ball.iter().map(|&x| (x, f_full[x])).collect(),
        phi,
        psi,
    };
    let report = verify_approximation(src, dst, &triple).ok()?;
    report.verdict.then_some(triple)
}

/// Extends the certificate's ψ to the whole step group: for each element of
/// the destination group, the source-group element minimizing the full-space
/// equivariance defect against the full map (least index on ties).
pub fn extend_psi_full(
    src: &GroupAction,
    dst: &GroupAction,
    f_full: &[usize],
) -> Vec<usize> {
    let n = src.space().n();
    (0..dst.group().order())
        .map(|l| {
            (0..src.group().order())
                .map(|g| {
                    let mut worst = 0.0_f64;
                    for x in 0..n {
                        let gx = src.apply(g, x);
                        worst =
                            worst.max(dst.space().dist(f_full[gx], dst.apply(l, f_full[x])));
                    }
                    (g, worst)
                })
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
                .map(|(g, _)| g)
                .expect("source group is nonempty")
        })
        .collect()
}

/// Parameters of the snap pipeline applied to each step.
#[derive(Debug, Clone, Copy)]
pub struct PipelineConfig {
    pub eta: f64,
    pub q_max: f64,
    pub com: ComConfig,
    pub oracle_size_limit: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            eta: 0.01,
            q_max: DEFAULT_Q_MAX,
            com: ComConfig::default(),
            oracle_size_limit: DEFAULT_GH_SIZE_LIMIT,
        }
    }
}

impl PipelineConfig {
    /// Honors the `EQGH_SEARCH_BOUND` override for the orbit-space oracle.
    pub fn from_env() -> Self {
        let mut cfg = PipelineConfig::default();
        if let Ok(raw) = std::env::var("EQGH_SEARCH_BOUND") {
            if let Ok(v) = raw.trim().parse::<usize>() {
                if v > cfg.oracle_size_limit {
                    cfg.oracle_size_limit = v;
                }
            }
        }
        cfg
    }
}

struct StepOutcome {
    epsilon: f64,
    grid_step: f64,
    certificates: StepCertificates,
    defect_q: f64,
    snap: Option<SnapResult>,
    kernel_order: Option<usize>,
    kernel_orbit_diameter: Option<f64>,
}

/// Embeds a cyclic group into SO(2) by exponents of its least generator.
fn embed_cyclic_so2(group: &FiniteGroup) -> Option<Vec<Rotation>> {
    let exps = group.cyclic_exponents()?;
    let order = group.order() as f64;
    Some(
        exps.iter()
            .map(|&k| Rotation::so2(2.0 * std::f64::consts::PI * k as f64 / order))
            .collect(),
    )
}

fn run_step(
    step_index: usize,
    step: &GroupAction,
    limit: &GroupAction,
    cfg: &PipelineConfig,
) -> Result<StepOutcome, String> {
    // Certificate values: the least grid ε where the natural construction
    // passes in both directions.
    let f_fwd = greedy_full_map(limit.space(), step.space());
    let f_bwd = greedy_full_map(step.space(), limit.space());
    let grid = epsilon_grid(limit, step);
    let mut found = None;
    for (k, &eps) in grid.iter().enumerate() {
        if let Some(forward) = natural_certificate(limit, step, &f_fwd, eps) {
            if let Some(backward) = natural_certificate(step, limit, &f_bwd, eps) {
                found = Some((k, eps, forward, backward));
                break;
            }
        }
    }
    let (k, epsilon, forward, backward) =
        found.ok_or_else(|| "no passing certificate on the grid".to_string())?;
    let grid_step = if k == 0 { grid[0] } else { grid[k] - grid[k - 1] };
    let forward_report = verify_approximation(limit, step, &forward).map_err(|e| e.to_string())?;
    let backward_report = verify_approximation(step, limit, &backward).map_err(|e| e.to_string())?;
    if !forward_report.verdict || !backward_report.verdict {
        return Err("certificate failed re-verification".to_string());
    }

    // ψ extended to the whole step group, then continuified.
    let psi_full = extend_psi_full(limit, step, &f_fwd);
    let source_embedding = embed_cyclic_so2(step.group());
    let limit_embedding = embed_cyclic_so2(limit.group());
    let (defect_q, snap, kernel_order, kernel_diam) = match (source_embedding, limit_embedding) {
        (Some(source), Some(limit_emb)) => {
            let images: Vec<Rotation> = psi_full
                .iter()
                .map(|&g| limit_emb[g].clone())
                .collect();
            // Strictly below half the source gap 2/|G|, so no pair of
            // net points falls inside the 2nu window even after rounding.
            let nu = 0.9 / step.group().order() as f64;
            // The limit group is finite, so the eta-net in it is the whole
            // embedded group once eta is below its minimum gap.
            let target = TargetNet::Points(limit_emb.clone());
            let rep = continuify(&source, &images, nu, cfg.eta, &target, &cfg.com)
                .map_err(|e| e.to_string())?;
            let continuified: Vec<Rotation> = source
                .iter()
                .map(|g| rep.eval(g))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let map = AlmostHomomorphism {
                source: step.group().clone(),
                images: MapImages::Rotations(continuified),
            };
            let q = homomorphism_defect(&map).map_err(|e| e.to_string())?.q;
            if q < cfg.q_max {
                let snap = snap_to_homomorphism(&map, cfg.q_max).map_err(|e| e.to_string())?;
                let (kernel_group, kernel_embedding) =
                    kernel(&snap.hom).map_err(|e| e.to_string())?;
                let diam = kernel_orbit_diameter(step, &kernel_embedding)
                    .map_err(|e| e.to_string())?;
                (q, Some(snap), Some(kernel_group.order()), Some(diam))
            } else {
                (q, None, None, None)
            }
        }
        // Non-cyclic groups stay outside the SO(2) pipeline.
        _ => (f64::NAN, None, None, None),
    };

    Ok(StepOutcome {
        epsilon,
        grid_step,
        certificates: StepCertificates {
            step: step_index,
            forward,
            forward_report,
            backward,
            backward_report,
        },
        defect_q,
        snap,
        kernel_order,
        kernel_orbit_diameter: kernel_diam,
    })
}

/// Runs a scenario end to end and assembles the report.
pub fn run_sequence(scenario: &Scenario) -> ConvergenceReport {
    run_sequence_with(scenario, &PipelineConfig::from_env())
}

pub fn run_sequence_with(scenario: &Scenario, cfg: &PipelineConfig) -> ConvergenceReport {
    let mut rows = Vec::new();
    let mut certificates = Vec::new();
    let mut symmetry_rows = Vec::new();

    let limit = match scenario.limit_candidate() {
        Ok(l) => l,
        Err(e) => {
            return ConvergenceReport {
                scenario: scenario.name.clone(),
                rows: vec![StepRow {
                    step: 0,
                    description: "limit candidate".into(),
                    epsilon: None,
                    grid_step: None,
                    defect_q: None,
                    snapped: false,
                    injective: None,
                    kernel_order: None,
                    kernel_orbit_diameter: None,
                    group_order: 0,
                    orbit_gh: None,
                    error: Some(e.to_string()),
                }],
                certificates: Vec::new(),
                symmetry: SymmetryReport {
                    limit_isometry_order: 0,
                    per_step: Vec::new(),
                    symmetry_loss: false,
                    loss_witness: None,
                    note: String::new(),
                },
            }
        }
    };
    let steps = match scenario.build_steps() {
        Ok(s) => s,
        Err(e) => {
            return ConvergenceReport {
                scenario: scenario.name.clone(),
                rows: vec![StepRow {
                    step: 0,
                    description: "steps".into(),
                    epsilon: None,
                    grid_step: None,
                    defect_q: None,
                    snapped: false,
                    injective: None,
                    kernel_order: None,
                    kernel_orbit_diameter: None,
                    group_order: 0,
                    orbit_gh: None,
                    error: Some(e.to_string()),
                }],
                certificates: Vec::new(),
                symmetry: SymmetryReport {
                    limit_isometry_order: 0,
                    per_step: Vec::new(),
                    symmetry_loss: false,
                    loss_witness: None,
                    note: String::new(),
                },
            }
        }
    };

    let limit_isometry_order = isometry_group_bounded(limit.space(), 64)
        .map(|a| a.group().order())
        .unwrap_or(0);
    let limit_orbit = limit.orbit_space().ok();

    let mut loss_witness = None;
    for (i, (description, step)) in steps.iter().enumerate() {
        let step_index = i + 1;
        let outcome = run_step(step_index, step, &limit, cfg);

        // Orbit spaces of a convergent sequence converge too; cross-check
        // with the brute-force oracle when it can see the instance.
        let orbit_gh = match (&limit_orbit, step.orbit_space().ok()) {
            (Some(lo), Some(so)) => {
                gh_distance_bruteforce_bounded(&so, lo, cfg.oracle_size_limit).ok()
            }
            _ => None,
        };

        let group_order = step.group().order();
        match outcome {
            Ok(outcome) => {
                let injective = outcome.kernel_order.map(|k| k == 1);
                if let Some(k) = outcome.kernel_order {
                    if k > 1 && loss_witness.is_none() {
                        loss_witness = Some((step_index, k));
                    }
                }
                symmetry_rows.push(SymmetryRow {
                    step: step_index,
                    group_order,
                    divides_limit_isometry: limit_isometry_order > 0
                        && limit_isometry_order % group_order == 0,
                    embedding_injective: injective,
                });
                rows.push(StepRow {
                    step: step_index,
                    description: description.clone(),
                    epsilon: Some(outcome.epsilon),
                    grid_step: Some(outcome.grid_step),
                    defect_q: if outcome.defect_q.is_nan() {
                        None
                    } else {
                        Some(outcome.defect_q)
                    },
                    snapped: outcome.snap.is_some(),
                    injective,
                    kernel_order: outcome.kernel_order,
                    kernel_orbit_diameter: outcome.kernel_orbit_diameter,
                    group_order,
                    orbit_gh,
                    error: None,
                });
                certificates.push(outcome.certificates);
            }
            Err(message) => {
                symmetry_rows.push(SymmetryRow {
                    step: step_index,
                    group_order,
                    divides_limit_isometry: limit_isometry_order > 0
                        && limit_isometry_order % group_order == 0,
                    embedding_injective: None,
                });
                rows.push(StepRow {
                    step: step_index,
                    description: description.clone(),
                    epsilon: None,
                    grid_step: None,
                    defect_q: None,
                    snapped: false,
                    injective: None,
                    kernel_order: None,
                    kernel_orbit_diameter: None,
                    group_order,
                    orbit_gh,
                    error: Some(message),
                });
            }
        }
    }

    let divisibility_loss = symmetry_rows.iter().any(|r| !r.divides_limit_isometry);
    let symmetry = SymmetryReport {
        limit_isometry_order,
        per_step: symmetry_rows,
        symmetry_loss: loss_witness.is_some() || divisibility_loss,
        loss_witness,
        note: "group-order divisibility stands in for symmetry-degree \
               semicontinuity; a modeling choice at finite sample scale"
            .into(),
    };

    ConvergenceReport {
        scenario: scenario.name.clone(),
        rows,
        certificates,
        symmetry,
    }
}

/// The divisibility shadow of upper semicontinuity of symmetry, as a
/// standalone report.
pub fn symmetry_semicontinuity_check(scenario: &Scenario) -> SymmetryReport {
    run_sequence(scenario).symmetry
}
