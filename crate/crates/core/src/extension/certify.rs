//! Grid certification: hypothesis checks, then verification of the extension
//! at every grid point and every sampled ruling coordinate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::local::{constant_tangent_angle, LocalSolution, RulingOptions, DEFAULT_FD_STEP};
use crate::cauchy::{tensor_product, CauchyProblem};
use crate::kernel::{max_principal_angle, Dims, Vector};
use crate::nullity::{check_hypotheses_on_grid, PointHypotheses};
use crate::rulings::{fiber_nullspace_oracle, ruling_frame_cofactor, ruling_frame_cross, span_angle};

pub const CERTIFICATE_VERSION: u32 = 1;

/// Thresholds of every check; all are relative unless noted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Numerical rank cutoff for fibers and frames.
    pub rank: f64,
    /// Nonsingularity of `A*` and rank of the solvability matrix.
    pub hypothesis: f64,
    /// Principal angle between the rulings and the fiber oracle (radians).
    #[serde(deserialize_with = "nan_or_number")]
    pub fiber_angle: f64,
    /// Cross-product vs cofactor rulings, per unit vector.
    pub formula: f64,
    /// Principal angle between `T_{sigma(a,0)}M` and `D` (radians).
    pub tangency: f64,
    /// Principal angle between `T_{sigma(a,b)}M` and `T_{sigma(a,0)}M` (radians).
    pub constant_tangent: f64,
    /// Rank cutoff for the second fundamental form, and the allowed spectral gap ratio.
    pub nullity: f64,
    /// `<alpha(E_i, E_k), N*>` along a ruling vs its value on `S`. Reported only:
    /// the two agree on cylinders but not on cones, where the form scales with
    /// the distance to the apex.
    pub transport: f64,
    /// Principal angle between fibers obtained from the two sections (radians).
    pub uniqueness: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: 1e-9,
            hypothesis: 1e-7,
            fiber_angle: 1e-8,
            formula: 1e-8,
            tangency: 1e-7,
            constant_tangent: 1e-6,
            nullity: 1e-6,
            transport: 1e-6,
            uniqueness: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyConfig {
    /// Grid points per chart axis.
    pub grid: usize,
    /// Samples per ruling axis in `[-b_max, b_max]`.
    pub b_points: usize,
    /// Overrides the automatic fiber half-width.
    pub b_max: Option<f64>,
    pub fd_step: f64,
    pub perturbation: Option<f64>,
    pub tolerances: Tolerances,
    /// Hash recorded in the certificate; computed from the canonical problem text when absent.
    pub digest: Option<String>,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self {
            grid: 17,
            b_points: 5,
            b_max: None,
            fd_step: DEFAULT_FD_STEP,
            perturbation: None,
            tolerances: Tolerances::default(),
            digest: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub per_axis: usize,
    pub domain: Vec<(f64, f64)>,
    pub b_points: usize,
    pub b_max: Option<f64>,
    pub fd_step: f64,
    pub perturbation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisRecord {
    pub a: Vec<f64>,
    pub sigma_min: Option<f64>,
    pub sigma_max: Option<f64>,
    pub nonsingular: bool,
    pub rank: Option<usize>,
    pub excess_rank: Option<usize>,
    pub solvable: bool,
    pub error: Option<String>,
}

impl From<&PointHypotheses<f64>> for HypothesisRecord {
    fn from(p: &PointHypotheses<f64>) -> Self {
        match &p.outcome {
            Ok((ns, sv)) => Self {
                a: p.a.clone(),
                sigma_min: Some(ns.sigma_min),
                sigma_max: Some(ns.sigma_max),
                nonsingular: ns.passed,
                rank: Some(sv.rank),
                excess_rank: Some(sv.excess_rank),
                solvable: sv.passed,
                error: None,
            },
            Err(e) => Self {
                a: p.a.clone(),
                sigma_min: None,
                sigma_max: None,
                nonsingular: false,
                rank: None,
                excess_rank: None,
                solvable: false,
                error: Some(e.to_string()),
            },
        }
    }
}

impl HypothesisRecord {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.nonsingular && self.solvable
    }

    /// `sigma_min / sigma_max` of `A*`.
    pub fn condition_ratio(&self) -> f64 {
        match (self.sigma_min, self.sigma_max) {
            (Some(lo), Some(hi)) if hi > 0.0 => lo / hi,
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberSample {
    pub b: Vec<f64>,
    pub point: Vec<f64>,
    pub nullity_index: usize,
    pub min_nonzero_sv: f64,
    pub max_null_sv: f64,
    pub tangent_angle: f64,
    pub transport_error: f64,
    pub symmetry_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub a: Vec<f64>,
    pub rulings: Vec<Vec<f64>>,
    #[serde(deserialize_with = "nan_or_number")]
    pub formula_gap: f64,
    pub fiber_angle: f64,
    #[serde(deserialize_with = "nan_or_number")]
    pub tangency_angle: f64,
    #[serde(deserialize_with = "nan_or_number")]
    pub constant_tangent_angle: f64,
    pub uniqueness_angle: Option<f64>,
    pub fiber: Vec<FiberSample>,
    pub error: Option<String>,
}

impl PointRecord {
    fn failed(a: Vec<f64>, error: String) -> Self {
        Self {
            a,
            rulings: Vec::new(),
            formula_gap: f64::NAN,
            fiber_angle: f64::NAN,
            tangency_angle: f64::NAN,
            constant_tangent_angle: f64::NAN,
            uniqueness_angle: None,
            fiber: Vec::new(),
            error: Some(error),
        }
    }

    fn nullity_range(&self) -> (usize, usize) {
        let lo = self.fiber.iter().map(|f| f.nullity_index).min().unwrap_or(0);
        let hi = self.fiber.iter().map(|f| f.nullity_index).max().unwrap_or(0);
        (lo, hi)
    }

    fn gap_ratio(&self) -> f64 {
        self.fiber.iter().map(|f| gap_ratio(f.min_nonzero_sv, f.max_null_sv)).fold(0.0, f64::max)
    }

    fn transport_error(&self) -> f64 {
        self.fiber.iter().map(|f| f.transport_error).fold(0.0, f64::max)
    }

    fn symmetry_defect(&self) -> f64 {
        self.fiber.iter().map(|f| f.symmetry_defect).fold(0.0, f64::max)
    }
}

fn gap_ratio(min_nonzero: f64, max_null: f64) -> f64 {
    if min_nonzero > 0.0 {
        max_null / min_nonzero
    } else if max_null == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    Frame,
    Nonsingularity,
    Solvability,
    Ruling,
    Immersion,
    Tangency,
    ConstantTangent,
    Nullity,
    Symmetry,
    Fiber,
    Formula,
    Uniqueness,
}

impl FailureReason {
    pub fn name(self) -> &'static str {
        match self {
            Self::Frame => "frame",
            Self::Nonsingularity => "nonsingularity",
            Self::Solvability => "solvability",
            Self::Ruling => "ruling",
            Self::Immersion => "immersion",
            Self::Tangency => "tangency",
            Self::ConstantTangent => "constant_tangent",
            Self::Nullity => "nullity",
            Self::Symmetry => "symmetry",
            Self::Fiber => "fiber",
            Self::Formula => "formula",
            Self::Uniqueness => "uniqueness",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Failed {
        reason: FailureReason,
        /// Grid point with the worst witness for `reason`.
        point: Vec<f64>,
        /// The witness value at that point.
        witness: f64,
        detail: String,
        /// Every check that failed somewhere, in reporting priority.
        failed_checks: Vec<FailureReason>,
    },
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified)
    }
}

/// Worst values over the whole grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub grid_points: usize,
    pub fiber_samples: usize,
    pub min_condition_ratio: f64,
    pub max_excess_rank: usize,
    pub max_formula_gap: f64,
    pub max_fiber_angle: f64,
    pub max_tangency_angle: f64,
    pub max_constant_tangent_angle: f64,
    pub nullity_min: usize,
    pub nullity_max: usize,
    pub max_gap_ratio: f64,
    pub max_symmetry_defect: f64,
    pub max_transport_error: f64,
    pub max_uniqueness_angle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub format_version: u32,
    pub problem_digest: String,
    pub dims: Dims,
    pub grid: GridSpec,
    pub tolerances: Tolerances,
    pub summary: Summary,
    pub verdict: Verdict,
    pub hypotheses: Vec<HypothesisRecord>,
    pub points: Vec<PointRecord>,
}

/// `null` (how JSON encodes a non-finite witness) reads back as NaN.
fn nan_or_number<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

/// Tensor grid of `per_axis` points per ruling axis on `[-b_max, b_max]`.
pub fn b_samples(b_max: f64, per_axis: usize, fiber_dim: usize) -> Vec<Vec<f64>> {
    let axis: Vec<f64> = if per_axis <= 1 {
        vec![0.0]
    } else {
        (0..per_axis).map(|k| -b_max + 2.0 * b_max * k as f64 / (per_axis - 1) as f64).collect()
    };
    tensor_product(&vec![axis; fiber_dim])
}

/// Fiber scale beyond which sampling stops being trustworthy.
const FIBER_SCALE_CAP: f64 = 1.0;

/// `0.25 * min(sigma_min of the sigma-Jacobian at b = 0) / max |∂_i X_j|`, with the
/// scale capped at `FIBER_SCALE_CAP` (flat rulings give an infinite ratio).
pub fn default_b_max(locals: &[LocalSolution<f64>]) -> f64 {
    let smin = locals.iter().map(|l| l.jacobian_sigma_min()).fold(f64::INFINITY, f64::min);
    let dmax = locals.iter().map(|l| l.max_ruling_derivative()).fold(0.0, f64::max);
    let scale = if dmax > 0.0 { (smin / dmax).min(FIBER_SCALE_CAP) } else { FIBER_SCALE_CAP };
    0.25 * scale
}

/// Runs every check over the grid. Failures are encoded in the verdict; when a
/// hypothesis fails anywhere no surface data is produced.
pub fn certify(problem: &CauchyProblem, config: &CertifyConfig) -> Certificate {
    let tol = config.tolerances;
    let grid = problem.domain().grid(config.grid);
    let hyps: Vec<HypothesisRecord> =
        check_hypotheses_on_grid::<f64>(problem, &grid, tol.hypothesis).iter().map(HypothesisRecord::from).collect();
    let digest = config.digest.clone().unwrap_or_else(|| crate::io::problem_digest(problem));
    let mut spec = GridSpec {
        per_axis: config.grid,
        domain: problem.domain().intervals().to_vec(),
        b_points: config.b_points,
        b_max: None,
        fd_step: config.fd_step,
        perturbation: config.perturbation,
    };

    let mut points = Vec::new();
    if hyps.iter().all(HypothesisRecord::passed) {
        let opts = RulingOptions { fd_step: config.fd_step, perturbation: config.perturbation };
        let locals: Vec<_> = grid.par_iter().map(|a| LocalSolution::new(problem, a, &opts)).collect();
        if let Some((a, e)) = grid.iter().zip(&locals).find_map(|(a, l)| l.as_ref().err().map(|e| (a, e))) {
            points.push(PointRecord::failed(a.clone(), e.to_string()));
        } else {
            let locals: Vec<LocalSolution<f64>> = locals.into_iter().map(|l| l.unwrap()).collect();
            let b_max = config.b_max.unwrap_or_else(|| default_b_max(&locals));
            spec.b_max = Some(b_max);
            let bs = b_samples(b_max, config.b_points, problem.dims().fiber());
            points = locals.par_iter().map(|l| verify_point(problem, l, &bs, &tol)).collect();
        }
    }

    let summary = summarize(&hyps, &points, grid.len());
    let verdict = judge(problem.dims(), &hyps, &points, &tol);
    Certificate {
        format_version: CERTIFICATE_VERSION,
        problem_digest: digest,
        dims: problem.dims(),
        grid: spec,
        tolerances: tol,
        summary,
        verdict,
        hypotheses: hyps,
        points,
    }
}

/// The extension sampled on the chart grid, ready for export.
#[derive(Debug, Clone)]
pub struct Solution {
    pub grid: Vec<Vec<f64>>,
    pub b_max: f64,
    pub b: Vec<Vec<f64>>,
    pub locals: Vec<LocalSolution<f64>>,
}

impl Solution {
    /// `sigma(a, b)` for every grid point (outer) and `b` sample (inner).
    pub fn points(&self) -> Vec<Vec<Vector<f64>>> {
        self.locals.iter().map(|l| self.b.iter().map(|b| l.point(b)).collect()).collect()
    }
}

/// Builds the rulings over the grid. Returns the failing verdict instead when a
/// hypothesis or the ruling construction fails anywhere.
pub fn solve(problem: &CauchyProblem, config: &CertifyConfig) -> Result<Solution, Verdict> {
    let tol = config.tolerances;
    let grid = problem.domain().grid(config.grid);
    let hyps: Vec<HypothesisRecord> =
        check_hypotheses_on_grid::<f64>(problem, &grid, tol.hypothesis).iter().map(HypothesisRecord::from).collect();
    if !hyps.iter().all(HypothesisRecord::passed) {
        return Err(judge(problem.dims(), &hyps, &[], &tol));
    }
    let opts = RulingOptions { fd_step: config.fd_step, perturbation: config.perturbation };
    let locals: Vec<_> = grid.par_iter().map(|a| LocalSolution::new(problem, a, &opts)).collect();
    let mut ok = Vec::with_capacity(locals.len());
    for (a, l) in grid.iter().zip(locals) {
        match l {
            Ok(l) => ok.push(l),
            Err(e) => return Err(judge(problem.dims(), &hyps, &[PointRecord::failed(a.clone(), e.to_string())], &tol)),
        }
    }
    let b_max = config.b_max.unwrap_or_else(|| default_b_max(&ok));
    let b = b_samples(b_max, config.b_points, problem.dims().fiber());
    Ok(Solution { grid, b_max, b, locals: ok })
}

fn verify_point(problem: &CauchyProblem, local: &LocalSolution<f64>, bs: &[Vec<f64>], tol: &Tolerances) -> PointRecord {
    match try_verify_point(problem, local, bs, tol) {
        Ok(r) => r,
        Err(e) => PointRecord::failed(local.a.clone(), e.to_string()),
    }
}

fn try_verify_point(
    problem: &CauchyProblem,
    local: &LocalSolution<f64>,
    bs: &[Vec<f64>],
    tol: &Tolerances,
) -> crate::error::Result<PointRecord> {
    let pd = &local.phi;
    let s = local.s;
    let cross = ruling_frame_cross(pd)?;
    let cof = ruling_frame_cofactor(pd)?;
    let formula_gap = cross
        .x
        .iter()
        .zip(&cof.x)
        .map(|(u, v)| (u - v).max_abs().min((u + v).max_abs()))
        .fold(0.0, f64::max);

    let oracle = fiber_nullspace_oracle(pd, tol.rank)?;
    let (actual, _) = crate::kernel::orthonormalize(local.ambient(), &local.x, tol.rank);
    let fiber_angle = if actual.dim() == oracle.x.len() {
        max_principal_angle(&actual, &oracle.span())?
    } else {
        std::f64::consts::FRAC_PI_2
    };

    let zero = vec![0.0; local.x.len()];
    let tangency_angle = max_principal_angle(&local.tangent_space(&zero)?, &pd.frame.distribution())?;
    let constant_tangent_angle = constant_tangent_angle(local, bs)?;

    let uniqueness_angle = match problem.nstar_alt() {
        Some(alt) => {
            let pd2 = problem.phi_data_with_section(&local.a, alt)?;
            let oracle2 = fiber_nullspace_oracle(&pd2, tol.rank)?;
            let cross2 = ruling_frame_cross(&pd2)?;
            Some(span_angle(&oracle, &oracle2).max(span_angle(&cross, &cross2)))
        }
        None => None,
    };

    let e_s: Vec<Vector<f64>> = pd.frame.e[..s].to_vec();
    let a_star_scale = pd.a_star.max_abs().max(1.0);
    let base_tangent = local.tangent_space(&zero)?;
    let mut fiber = Vec::with_capacity(bs.len());
    for b in bs {
        let sample = local.sample(b, tol.nullity)?;
        let tangent_angle = max_principal_angle(&base_tangent, &sample.tangent)?;
        let form = local.shape_operator_along(b, &e_s, &pd.frame.nstar_unit)?;
        // <alpha(E_i, E_k), N*> = -<∇_{E_i} N*, E_k>
        let mut transport_error = 0.0_f64;
        for i in 0..s {
            for k in 0..s {
                transport_error = transport_error.max((form[(i, k)] + pd.a_star[(i, k)]).abs());
            }
        }
        transport_error /= a_star_scale;
        fiber.push(FiberSample {
            b: b.clone(),
            point: sample.point.coords().to_vec(),
            nullity_index: sample.nullity_index,
            min_nonzero_sv: sample.min_nonzero_sv,
            max_null_sv: sample.max_null_sv,
            tangent_angle,
            transport_error,
            symmetry_defect: sample.symmetry_defect(),
        });
    }

    Ok(PointRecord {
        a: local.a.clone(),
        rulings: local.x.iter().map(|x| x.coords().to_vec()).collect(),
        formula_gap,
        fiber_angle,
        tangency_angle,
        constant_tangent_angle,
        uniqueness_angle,
        fiber,
        error: None,
    })
}

fn summarize(hyps: &[HypothesisRecord], points: &[PointRecord], grid_points: usize) -> Summary {
    let fmax = |f: &dyn Fn(&PointRecord) -> f64| points.iter().map(f).fold(0.0, f64::max);
    let ranges: Vec<(usize, usize)> = points.iter().filter(|p| p.error.is_none()).map(PointRecord::nullity_range).collect();
    let uniq: Vec<f64> = points.iter().filter_map(|p| p.uniqueness_angle).collect();
    Summary {
        grid_points,
        fiber_samples: points.iter().map(|p| p.fiber.len()).sum(),
        min_condition_ratio: hyps.iter().map(HypothesisRecord::condition_ratio).fold(f64::INFINITY, f64::min),
        max_excess_rank: hyps.iter().filter_map(|h| h.excess_rank).max().unwrap_or(0),
        max_formula_gap: fmax(&|p| p.formula_gap),
        max_fiber_angle: fmax(&|p| p.fiber_angle),
        max_tangency_angle: fmax(&|p| p.tangency_angle),
        max_constant_tangent_angle: fmax(&|p| p.constant_tangent_angle),
        nullity_min: ranges.iter().map(|r| r.0).min().unwrap_or(0),
        nullity_max: ranges.iter().map(|r| r.1).max().unwrap_or(0),
        max_gap_ratio: fmax(&PointRecord::gap_ratio),
        max_symmetry_defect: fmax(&PointRecord::symmetry_defect),
        max_transport_error: fmax(&PointRecord::transport_error),
        max_uniqueness_angle: if uniq.is_empty() { None } else { Some(uniq.iter().copied().fold(0.0, f64::max)) },
    }
}

/// A failed check: reason, worst point, witness, human-readable detail.
type Finding = (FailureReason, Vec<f64>, f64, String);

/// First point maximizing `score` among those where it exceeds `limit`.
fn worst<I>(items: I, limit: f64) -> Option<(Vec<f64>, f64)>
where
    I: Iterator<Item = (Vec<f64>, f64)>,
{
    let mut best: Option<(Vec<f64>, f64)> = None;
    for (a, v) in items {
        let bad = v.is_nan() || v > limit;
        if bad && best.as_ref().is_none_or(|(_, w)| v > *w || (w.is_finite() && v.is_nan())) {
            best = Some((a, v));
        }
    }
    best
}

fn judge(dims: Dims, hyps: &[HypothesisRecord], points: &[PointRecord], tol: &Tolerances) -> Verdict {
    let mut findings: Vec<Finding> = Vec::new();

    if let Some(h) = hyps.iter().find(|h| h.error.is_some()) {
        findings.push((FailureReason::Frame, h.a.clone(), f64::NAN, h.error.clone().unwrap_or_default()));
    }
    let ok_hyps = || hyps.iter().filter(|h| h.error.is_none());
    if let Some(h) = ok_hyps().filter(|h| !h.nonsingular).min_by(|x, y| x.condition_ratio().total_cmp(&y.condition_ratio())) {
        findings.push((
            FailureReason::Nonsingularity,
            h.a.clone(),
            h.condition_ratio(),
            format!(
                "A* is singular: sigma_min = {:e}, sigma_max = {:e}",
                h.sigma_min.unwrap_or(0.0),
                h.sigma_max.unwrap_or(0.0)
            ),
        ));
    }
    if let Some(h) = ok_hyps().filter(|h| !h.solvable).max_by_key(|h| h.excess_rank.unwrap_or(0)) {
        let excess = h.excess_rank.unwrap_or(0);
        findings.push((
            FailureReason::Solvability,
            h.a.clone(),
            excess as f64,
            format!("Im phi exceeds phi(TS, N*): rank = {}, excess_rank = {}", h.rank.unwrap_or(0), excess),
        ));
    }

    if let Some(p) = points.iter().find(|p| p.error.is_some()) {
        let msg = p.error.clone().unwrap_or_default();
        let reason = if msg.contains("immersion") { FailureReason::Immersion } else { FailureReason::Ruling };
        findings.push((reason, p.a.clone(), f64::NAN, msg));
    }
    let good: Vec<&PointRecord> = points.iter().filter(|p| p.error.is_none()).collect();
    let mut angle_check = |reason: FailureReason, label: &str, limit: f64, f: &dyn Fn(&PointRecord) -> f64| {
        if let Some((a, v)) = worst(good.iter().map(|p| (p.a.clone(), f(p))), limit) {
            findings.push((reason, a, v, format!("{label} = {v:e} exceeds {limit:e}")));
        }
    };
    angle_check(FailureReason::Tangency, "angle between T M and D", tol.tangency, &|p| p.tangency_angle);
    angle_check(FailureReason::ConstantTangent, "tangent variation along rulings", tol.constant_tangent, &|p| {
        p.constant_tangent_angle
    });
    angle_check(FailureReason::Nullity, "spectral gap ratio", tol.nullity, &PointRecord::gap_ratio);
    angle_check(FailureReason::Symmetry, "second fundamental form asymmetry", 1e-7, &PointRecord::symmetry_defect);
    angle_check(FailureReason::Fiber, "angle between rulings and fiber", tol.fiber_angle, &|p| p.fiber_angle);
    angle_check(FailureReason::Formula, "cross vs cofactor rulings", tol.formula, &|p| p.formula_gap);
    angle_check(FailureReason::Uniqueness, "fiber dependence on N*", tol.uniqueness, &|p| {
        p.uniqueness_angle.unwrap_or(0.0)
    });

    // nullity index must equal m - s at every sample
    let expected = dims.fiber();
    if let Some(p) = good.iter().find(|p| p.fiber.iter().any(|f| f.nullity_index != expected)) {
        let f = p.fiber.iter().find(|f| f.nullity_index != expected).unwrap();
        findings.push((
            FailureReason::Nullity,
            p.a.clone(),
            f.nullity_index as f64,
            format!("nullity index {} at b = {:?}, expected {}", f.nullity_index, f.b, expected),
        ));
    }

    if findings.is_empty() {
        return Verdict::Certified;
    }
    findings.sort_by_key(|f| f.0 as u8);
    let mut failed_checks: Vec<FailureReason> = findings.iter().map(|f| f.0).collect();
    failed_checks.dedup();
    let (reason, point, witness, detail) = findings.swap_remove(0);
    Verdict::Failed { reason, point, witness, detail, failed_checks }
}
