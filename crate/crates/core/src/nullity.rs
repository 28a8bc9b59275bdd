//! The bilinear map `phi_p(v, n) = π^⊤ ∇_v N` on `T_pS × D_p^⊥`, the shape
//! operator `A* = π_S ∘ phi(·, N*)`, and the two hypothesis checks.
//!
//! For a section `N` of `D^⊥` and any section `Y` of `D`, `<∇_v N, Y> = -<N, ∇_v Y>`.
//! Applied to the generators of `D`, whose derivatives come exactly from jets,
//! this evaluates `phi` from the pointwise value of the normal alone.

use rayon::prelude::*;

use crate::cauchy::{CauchyProblem, FrameJets};
use crate::error::{Error, Result};
use crate::expr::{ExprAst, FieldJet};
use crate::kernel::{numerical_rank, singular_values, Matrix, Subspace, Svd, Vector, DEFAULT_RANK_TOL};
use crate::scalar::Scalar;

pub use crate::cauchy::AdaptedFramePoint;

/// Default relative tolerance of both hypothesis checks.
pub const DEFAULT_HYPOTHESIS_TOL: f64 = 1e-7;
/// Residual allowed for a vector claimed to lie in `D^⊥` (or `D`).
pub const NORMALITY_TOL: f64 = 1e-9;

/// Everything derived from `phi` at one chart point.
#[derive(Debug, Clone)]
pub struct PhiData<T> {
    pub frame: AdaptedFramePoint<T>,
    /// `s x m`, entry `(i, k) = <∇_{E_i} N*, E_k>`.
    pub phi_star: Matrix<T>,
    /// One `s x m` block per normal `N_β`.
    pub phi_full: Vec<Matrix<T>>,
    /// `s x s` matrix of `A*` in `E_1..E_s`.
    pub a_star: Matrix<T>,
    pub sigma_min_astar: T,
    pub sigma_max_astar: T,
    /// `Im phi_p ⊂ D_p`.
    pub image_phi: Subspace<T>,
    /// `phi_p(T_pS, N*_p)`.
    pub image_phi_star: Subspace<T>,
}

impl<T: Scalar> PhiData<T> {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.phi_star.rows(), self.phi_star.cols(), self.phi_full.len())
    }

    /// `phi(E_i, N*)` as an ambient vector (`i` 0-based).
    pub fn phi_star_vector(&self, i: usize) -> Vector<T> {
        self.frame.from_e_coords(self.phi_star.row(i))
    }

    /// All rows `phi(E_i, N_β)` in `E`-coordinates, stacked block by block.
    pub fn stacked_full(&self) -> Matrix<T> {
        let rows: Vec<Vec<T>> = self.phi_full.iter().flat_map(|b| (0..b.rows()).map(|i| b.row(i).to_vec())).collect();
        Matrix::from_rows(&rows)
    }
}

/// `E`-coordinates of `phi(E_i, n)` (`i` 0-based, `n` assumed normal).
pub(crate) fn phi_coords<T: Scalar>(fj: &FrameJets<T>, s: usize, i: usize, normal: &Vector<T>) -> Vec<T> {
    let m = fj.r_inv.rows();
    let u = fj.chart_direction(i, s);
    // <n, ∂_u g_l>
    let pairing: Vec<T> = fj
        .generator_derivs
        .iter()
        .map(|dg| {
            let mut acc = T::zero();
            for (q, &w) in u.iter().enumerate() {
                acc = acc + w * normal.dot(&dg[q]);
            }
            acc
        })
        .collect();
    (0..m)
        .map(|k| {
            let mut acc = T::zero();
            for l in 0..=k {
                acc = acc + fj.r_inv[(l, k)] * pairing[l];
            }
            -acc
        })
        .collect()
}

fn row_space<T: Scalar>(rows: &Matrix<T>, frame: &AdaptedFramePoint<T>, tol: T) -> Subspace<T> {
    let n = frame.p.dim();
    if rows.rows() == 0 {
        return Subspace::empty(n);
    }
    let svd = Svd::new(rows);
    let top = svd.sigma[0];
    if top == T::zero() {
        return Subspace::empty(n);
    }
    let basis = (0..rows.cols())
        .filter(|&k| svd.sigma[k] > tol * top)
        .map(|k| frame.from_e_coords(svd.v.column(k).coords()))
        .collect();
    Subspace::from_basis(n, basis, true)
}

fn assemble<T: Scalar>(fj: &FrameJets<T>, s: usize) -> PhiData<T> {
    let frame = &fj.frame;
    let m = frame.e.len();
    let phi_rows = |normal: &Vector<T>| -> Matrix<T> {
        let rows: Vec<Vec<T>> = (0..s).map(|i| phi_coords(fj, s, i, normal)).collect();
        Matrix::from_rows(&rows)
    };
    let phi_star = phi_rows(&frame.nstar_unit);
    let phi_full: Vec<Matrix<T>> = frame.n.iter().map(phi_rows).collect();
    let cols: Vec<usize> = (0..s).collect();
    let rows: Vec<usize> = (0..s).collect();
    let a_star = phi_star.select(&rows, &cols);
    let sv = singular_values(&a_star);
    let sigma_max_astar = sv.first().copied().unwrap_or(T::zero());
    let sigma_min_astar = sv.last().copied().unwrap_or(T::zero());
    let tol = T::lit(DEFAULT_RANK_TOL);
    let image_phi_star = row_space(&phi_star, frame, tol);
    let stacked: Vec<Vec<T>> = phi_full.iter().flat_map(|b| (0..s).map(|i| b.row(i).to_vec())).collect();
    let image_phi = row_space(&Matrix::from_rows(&stacked), frame, tol);
    debug_assert_eq!(phi_star.cols(), m);
    PhiData {
        frame: frame.clone(),
        phi_star,
        phi_full,
        a_star,
        sigma_min_astar,
        sigma_max_astar,
        image_phi,
        image_phi_star,
    }
}

impl CauchyProblem {
    /// `phi(E_i, normal)` at `xi(a)`, with `i` 1-based.
    pub fn phi<T: Scalar>(&self, a: &[T], i: usize, normal: &Vector<T>) -> Result<Vector<T>> {
        self.check_point(a)?;
        if !self.domain().contains(a) {
            return Err(Error::OutsideDomain { point: a.iter().map(|x| x.as_f64()).collect() });
        }
        let s = self.dims().s;
        if i == 0 || i > s {
            return Err(Error::TangentIndex { index: i, s });
        }
        let fj = self.frame_with_jets(a)?;
        check_normal(&fj.frame, normal)?;
        Ok(fj.frame.from_e_coords(&phi_coords(&fj, s, i - 1, normal)))
    }

    pub fn phi_data<T: Scalar>(&self, a: &[T]) -> Result<PhiData<T>> {
        let fj = self.frame_with_jets(a)?;
        Ok(assemble(&fj, self.dims().s))
    }

    /// `phi_data` computed with a different normal section in place of `nstar`.
    pub fn phi_data_with_section<T: Scalar>(&self, a: &[T], section: &[ExprAst]) -> Result<PhiData<T>> {
        let fj = self.frame_with_section(a, section)?;
        Ok(assemble(&fj, self.dims().s))
    }
}

fn check_normal<T: Scalar>(frame: &AdaptedFramePoint<T>, normal: &Vector<T>) -> Result<()> {
    let tangential = frame.distribution().project(normal).norm();
    let scale = T::one().max(normal.norm());
    if tangential > T::lit(NORMALITY_TOL) * scale {
        return Err(Error::NotNormal { residual: tangential.as_f64() });
    }
    Ok(())
}

/// Outcome of the nonsingularity test of `A*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonsingularCheck<T> {
    pub passed: bool,
    pub sigma_min: T,
    pub sigma_max: T,
}

/// Outcome of the solvability test `Im phi_p = phi_p(T_pS, N*_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolvabilityCheck {
    pub passed: bool,
    pub rank: usize,
    pub excess_rank: usize,
}

/// Passes iff `sigma_min(A*) > tol * max(sigma_max(A*), 1)`: relative, with an absolute floor for tiny `A*`.
pub fn check_nonsingular<T: Scalar>(pd: &PhiData<T>, tol: T) -> NonsingularCheck<T> {
    let passed = pd.sigma_min_astar > tol * pd.sigma_max_astar.max(T::one());
    NonsingularCheck { passed, sigma_min: pd.sigma_min_astar, sigma_max: pd.sigma_max_astar }
}

/// Passes iff `[basis(phi(TS, N*)) | phi(E_i, N_β) ...]` has numerical rank `s`.
pub fn check_solvability<T: Scalar>(pd: &PhiData<T>, tol: T) -> SolvabilityCheck {
    let s = pd.a_star.rows();
    let mut cols: Vec<Vec<T>> = pd.image_phi_star.basis().iter().map(|b| pd.frame.e_coords(b)).collect();
    for block in &pd.phi_full {
        for i in 0..block.rows() {
            cols.push(block.row(i).to_vec());
        }
    }
    let rank = numerical_rank(&Matrix::from_columns(&cols), tol);
    SolvabilityCheck { passed: rank == s, rank, excess_rank: rank.saturating_sub(s) }
}

/// A local section of `D^⊥` around a chart point, used to probe that `phi`
/// depends on the normal only through its value.
pub trait NormalExtension<T: Scalar>: Sync {
    fn value(&self, problem: &CauchyProblem, a: &[T]) -> Result<Vector<T>>;

    /// Derivative along the chart vector `u`; the default is a five-point stencil.
    fn derivative(&self, problem: &CauchyProblem, a: &[T], u: &[T]) -> Result<Vector<T>> {
        let h = T::lit(PROBE_STEP);
        let shifted = |k: T| -> Result<Vector<T>> {
            let p: Vec<T> = a.iter().zip(u).map(|(&x, &w)| x + k * h * w).collect();
            self.value(problem, &p)
        };
        let f2 = shifted(T::lit(2.0))?;
        let f1 = shifted(T::one())?;
        let m1 = shifted(-T::one())?;
        let m2 = shifted(T::lit(-2.0))?;
        let mut d = &(&m2 - &f2) + &(&f1 - &m1).scale(T::lit(8.0));
        d = d.scale(T::one() / (T::lit(12.0) * h));
        Ok(d)
    }
}

/// Step of the five-point stencil used by [`NormalExtension::derivative`].
pub const PROBE_STEP: f64 = 1e-3;

/// The unit projection of an ambient field onto `D^⊥`, optionally made
/// orthogonal to the unit projection of `nstar`.
#[derive(Debug, Clone)]
pub struct ProjectedSection {
    pub field: Vec<ExprAst>,
    pub orthogonal_to_nstar: bool,
}

impl ProjectedSection {
    /// The canonical extension of `N*` used by `phi_data`.
    pub fn canonical(problem: &CauchyProblem) -> Self {
        Self { field: problem.nstar().to_vec(), orthogonal_to_nstar: false }
    }
}

impl<T: Scalar> NormalExtension<T> for ProjectedSection {
    fn value(&self, problem: &CauchyProblem, a: &[T]) -> Result<Vector<T>> {
        let frame = problem.adapted_frame(a)?;
        let raw = Vector::new(self.field.iter().map(|e| e.eval(a)).collect::<Result<Vec<T>, _>>()?);
        let mut v = frame.normal_space().project(&raw);
        if self.orthogonal_to_nstar {
            let k = v.dot(&frame.nstar_unit);
            v.axpy(-k, &frame.nstar_unit);
        }
        let norm = v.norm();
        if norm < T::lit(crate::cauchy::NORMAL_SECTION_MIN) {
            return Err(Error::NormalSectionVanishes { norm: norm.as_f64() });
        }
        Ok(v.scale(T::one() / norm))
    }
}

/// A normal field given directly by expressions (must already lie in `D^⊥`);
/// its derivative is exact.
#[derive(Debug, Clone)]
pub struct ExprExtension(pub Vec<ExprAst>);

impl<T: Scalar> NormalExtension<T> for ExprExtension {
    fn value(&self, _problem: &CauchyProblem, a: &[T]) -> Result<Vector<T>> {
        Ok(Vector::new(self.0.iter().map(|e| e.eval(a)).collect::<Result<Vec<T>, _>>()?))
    }

    fn derivative(&self, _problem: &CauchyProblem, a: &[T], u: &[T]) -> Result<Vector<T>> {
        Ok(FieldJet::evaluate(&self.0, a)?.directional(u))
    }
}

/// `(1 + |a - base|^2) N(a)`: same value at `base`, different extension.
pub struct Scaled<E, T> {
    pub inner: E,
    pub base: Vec<T>,
}

impl<T: Scalar, E: NormalExtension<T>> NormalExtension<T> for Scaled<E, T> {
    fn value(&self, problem: &CauchyProblem, a: &[T]) -> Result<Vector<T>> {
        let d2 = a.iter().zip(&self.base).fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y));
        Ok(self.inner.value(problem, a)?.scale(T::one() + d2))
    }
}

/// `cos(t) N(a) + sin(t) M(a)` with `t = a_1 - base_1`; `N`, `M` orthonormal sections.
pub struct Rotated<E, F, T> {
    pub first: E,
    pub second: F,
    pub base: Vec<T>,
}

impl<T: Scalar, E: NormalExtension<T>, F: NormalExtension<T>> NormalExtension<T> for Rotated<E, F, T> {
    fn value(&self, problem: &CauchyProblem, a: &[T]) -> Result<Vector<T>> {
        let t = a[0] - self.base[0];
        let n = self.first.value(problem, a)?;
        let m = self.second.value(problem, a)?;
        Ok(&n.scale(t.cos()) + &m.scale(t.sin()))
    }
}

impl CauchyProblem {
    /// `π^⊤ ∂_{E_i} N` for an explicit extension `N` (`i` 1-based), by direct
    /// differentiation of the extension.
    pub fn phi_via_extension<T: Scalar, E: NormalExtension<T>>(
        &self,
        a: &[T],
        i: usize,
        ext: &E,
    ) -> Result<Vector<T>> {
        let s = self.dims().s;
        if i == 0 || i > s {
            return Err(Error::TangentIndex { index: i, s });
        }
        let fj = self.frame_with_jets(a)?;
        let u = fj.chart_direction(i - 1, s);
        let v = ext.value(self, a)?;
        check_normal(&fj.frame, &v)?;
        let d = ext.derivative(self, a, &u)?;
        Ok(fj.frame.distribution().project(&d))
    }

    /// Norm of the difference of `phi(E_i, ·)` computed through two extensions
    /// of the same normal vector.
    pub fn well_definedness_probe<T: Scalar, E1: NormalExtension<T>, E2: NormalExtension<T>>(
        &self,
        a: &[T],
        i: usize,
        first: &E1,
        second: &E2,
    ) -> Result<T> {
        let v1 = first.value(self, a)?;
        let v2 = second.value(self, a)?;
        let diff = (&v1 - &v2).norm();
        if diff > T::lit(1e-12) * T::one().max(v1.norm()) {
            return Err(Error::ExtensionsDisagree { difference: diff.as_f64() });
        }
        let p1 = self.phi_via_extension(a, i, first)?;
        let p2 = self.phi_via_extension(a, i, second)?;
        Ok((&p1 - &p2).norm())
    }
}

/// Hypothesis outcomes at one grid point.
#[derive(Debug, Clone)]
pub struct PointHypotheses<T> {
    pub a: Vec<T>,
    pub outcome: std::result::Result<(NonsingularCheck<T>, SolvabilityCheck), Error>,
}

impl<T: Scalar> PointHypotheses<T> {
    pub fn passed(&self) -> bool {
        matches!(&self.outcome, Ok((ns, sv)) if ns.passed && sv.passed)
    }
}

/// Evaluates both checks at every grid point (in parallel, results in grid order).
pub fn check_hypotheses_on_grid<T: Scalar>(
    problem: &CauchyProblem,
    grid: &[Vec<f64>],
    tol: T,
) -> Vec<PointHypotheses<T>> {
    grid.par_iter()
        .map(|g| {
            let a: Vec<T> = g.iter().map(|&x| T::lit(x)).collect();
            let outcome = problem.phi_data(&a).map(|pd| {
                let ns = check_nonsingular(&pd, tol);
                let sv = check_solvability(&pd, tol);
                (ns, sv)
            });
            PointHypotheses { a, outcome }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Dims;

    fn cylinder() -> CauchyProblem {
        CauchyProblem::from_strings(
            Dims::new(1, 2, 1).unwrap(),
            &["cos(a1)", "sin(a1)", "0"],
            &[&["0", "0", "1"]],
            &["cos(a1)", "sin(a1)", "0"],
            &[(-1.2, 1.2)],
        )
        .unwrap()
    }

    #[test]
    fn cylinder_phi_star() {
        let pd = cylinder().phi_data(&[0.4_f64]).unwrap();
        assert!((pd.phi_star[(0, 0)] - 1.0).abs() < 1e-14);
        assert!(pd.phi_star[(0, 1)].abs() < 1e-14);
        assert!(check_nonsingular(&pd, 1e-7).passed);
        let sv = check_solvability(&pd, 1e-7);
        assert!(sv.passed);
        assert_eq!(sv.excess_rank, 0);
    }

    #[test]
    fn planar_data_is_singular() {
        let p = CauchyProblem::from_strings(
            Dims::new(1, 2, 1).unwrap(),
            &["cos(a1)", "sin(a1)", "0"],
            &[&["cos(a1)", "sin(a1)", "0"]],
            &["0", "0", "1"],
            &[(-1.0, 1.0)],
        )
        .unwrap();
        let pd = p.phi_data(&[0.2_f64]).unwrap();
        assert!(pd.phi_star.max_abs() < 1e-15);
        let ns = check_nonsingular(&pd, 1e-7);
        assert!(!ns.passed);
        assert_eq!(ns.sigma_min, 0.0);
    }

    #[test]
    fn relative_threshold() {
        let mut pd = cylinder().phi_data(&[0.0_f64]).unwrap();
        pd.a_star = Matrix::from_f64_rows(&[&[1.0, 0.0], &[0.0, 1e-14]]);
        pd.sigma_max_astar = 1.0;
        pd.sigma_min_astar = 1e-14;
        assert!(!check_nonsingular(&pd, 1e-9).passed);
    }

    #[test]
    fn phi_argument_checks() {
        let p = cylinder();
        let n = Vector::<f64>::from_f64(&[1.0, 0.0, 0.0]);
        assert!(p.phi(&[0.0], 1, &n).is_ok());
        assert!(matches!(p.phi(&[0.0], 2, &n), Err(Error::TangentIndex { .. })));
        assert!(matches!(p.phi(&[5.0], 1, &n), Err(Error::OutsideDomain { .. })));
        let t = Vector::<f64>::from_f64(&[0.0, 1.0, 0.0]);
        assert!(matches!(p.phi(&[0.0], 1, &t), Err(Error::NotNormal { .. })));
    }
}
