//! Cauchy data `(S, D, N*)` and the adapted orthonormal frame along `S`.

use crate::error::{Error, Result};
use crate::expr::{ExprAst, FieldJet};
use crate::kernel::{orthonormalize, Dims, Matrix, Vector};
use crate::scalar::Scalar;

/// Relative residual below which a generator is considered dependent.
pub const FRAME_TOL: f64 = 1e-9;
/// Minimum norm of the projected normal section.
pub const NORMAL_SECTION_MIN: f64 = 1e-10;

/// Closed axis-aligned box in chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    intervals: Vec<(f64, f64)>,
}

impl Domain {
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        for (k, &(lo, hi)) in intervals.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidProblem(format!("domain interval {k} is empty: [{lo}, {hi}]")));
            }
        }
        Ok(Self { intervals })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn contains<T: Scalar>(&self, a: &[T]) -> bool {
        a.len() == self.intervals.len()
            && a.iter().zip(&self.intervals).all(|(&x, &(lo, hi))| {
                let x = x.as_f64();
                x >= lo && x <= hi
            })
    }

    /// Tensor grid with `per_axis` points per axis (endpoints included), in
    /// lexicographic order with the last axis varying fastest.
    pub fn grid(&self, per_axis: usize) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = self
            .intervals
            .iter()
            .map(|&(lo, hi)| {
                if per_axis <= 1 {
                    vec![0.5 * (lo + hi)]
                } else {
                    (0..per_axis)
                        .map(|k| lo + (hi - lo) * k as f64 / (per_axis - 1) as f64)
                        .collect()
                }
            })
            .collect();
        tensor_product(&axes)
    }
}

pub(crate) fn tensor_product(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in axes {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for prefix in &out {
            for &x in axis {
                let mut p = prefix.clone();
                p.push(x);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Symbolic Cauchy data over one chart of `S`.
///
/// `D` is given as `TS` plus `m - s` extra generator fields, so `TS ⊂ D` holds
/// by construction. `nstar` need not be unit or normal: it is projected onto
/// `D^⊥` and normalized pointwise.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyProblem {
    dims: Dims,
    xi: Vec<ExprAst>,
    d_extra: Vec<Vec<ExprAst>>,
    nstar: Vec<ExprAst>,
    nstar_alt: Option<Vec<ExprAst>>,
    domain: Domain,
}

impl CauchyProblem {
    pub fn new(
        dims: Dims,
        xi: Vec<ExprAst>,
        d_extra: Vec<Vec<ExprAst>>,
        nstar: Vec<ExprAst>,
        domain: Domain,
    ) -> Result<Self> {
        let n = dims.ambient();
        let bad = |what: &str| Err(Error::InvalidProblem(what.to_string()));
        if xi.len() != n {
            return bad("xi must have m + c components");
        }
        if d_extra.len() != dims.fiber() || d_extra.iter().any(|d| d.len() != n) {
            return bad("d_extra must hold m - s fields of m + c components");
        }
        if nstar.len() != n {
            return bad("nstar must have m + c components");
        }
        if domain.intervals().len() != dims.s {
            return bad("domain must have s intervals");
        }
        let all = xi.iter().chain(d_extra.iter().flatten()).chain(&nstar);
        if all.clone().any(|e| e.arity() != dims.s) {
            return bad("every expression must be in the parameters a1..as");
        }
        Ok(Self { dims, xi, d_extra, nstar, nstar_alt: None, domain })
    }

    /// Parses every field from source strings.
    pub fn from_strings(
        dims: Dims,
        xi: &[&str],
        d_extra: &[&[&str]],
        nstar: &[&str],
        domain: &[(f64, f64)],
    ) -> Result<Self> {
        let s = dims.s;
        let parse_all = |xs: &[&str]| -> Result<Vec<ExprAst>> {
            xs.iter().map(|t| crate::expr::parse(t, s).map_err(Error::from)).collect()
        };
        let d = d_extra.iter().map(|f| parse_all(f)).collect::<Result<Vec<_>>>()?;
        Self::new(dims, parse_all(xi)?, d, parse_all(nstar)?, Domain::new(domain.to_vec())?)
    }

    /// Attaches a second normal section used by the uniqueness probe.
    pub fn with_nstar_alt(mut self, alt: Vec<ExprAst>) -> Result<Self> {
        if alt.len() != self.dims.ambient() || alt.iter().any(|e| e.arity() != self.dims.s) {
            return Err(Error::InvalidProblem("nstar_alt must have m + c components in a1..as".into()));
        }
        self.nstar_alt = Some(alt);
        Ok(self)
    }

    /// Same data with `nstar` replaced.
    pub fn with_nstar(&self, nstar: Vec<ExprAst>) -> Result<Self> {
        let mut p = Self::new(self.dims, self.xi.clone(), self.d_extra.clone(), nstar, self.domain.clone())?;
        p.nstar_alt = self.nstar_alt.clone();
        Ok(p)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn xi(&self) -> &[ExprAst] {
        &self.xi
    }

    pub fn d_extra(&self) -> &[Vec<ExprAst>] {
        &self.d_extra
    }

    pub fn nstar(&self) -> &[ExprAst] {
        &self.nstar
    }

    pub fn nstar_alt(&self) -> Option<&[ExprAst]> {
        self.nstar_alt.as_deref()
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub(crate) fn check_point<T: Scalar>(&self, a: &[T]) -> Result<()> {
        if a.len() != self.dims.s {
            return Err(Error::PointArity { expected: self.dims.s, got: a.len() });
        }
        Ok(())
    }

    /// `xi(a)`.
    pub fn xi_at<T: Scalar>(&self, a: &[T]) -> Result<Vector<T>> {
        self.check_point(a)?;
        Ok(Vector::new(self.xi.iter().map(|e| e.eval(a)).collect::<Result<_, _>>()?))
    }

    pub fn adapted_frame<T: Scalar>(&self, a: &[T]) -> Result<AdaptedFramePoint<T>> {
        Ok(self.frame_with_jets(a)?.frame)
    }

    /// Adapted frame plus the first-order data of the generators of `D`.
    pub(crate) fn frame_with_jets<T: Scalar>(&self, a: &[T]) -> Result<FrameJets<T>> {
        self.frame_with_section(a, &self.nstar)
    }

    pub(crate) fn frame_with_section<T: Scalar>(&self, a: &[T], nstar: &[ExprAst]) -> Result<FrameJets<T>> {
        self.check_point(a)?;
        let Dims { s, m, c } = self.dims;
        let n = self.dims.ambient();
        let tol = T::lit(FRAME_TOL);

        let xi = FieldJet::evaluate(&self.xi, a)?;
        let extra = self
            .d_extra
            .iter()
            .map(|d| FieldJet::evaluate(d, a))
            .collect::<Result<Vec<_>, _>>()?;

        let tangents: Vec<Vector<T>> = (0..s).map(|i| xi.partial(i)).collect();
        let (_, rank_s) = orthonormalize(n, &tangents, tol);
        if rank_s < s {
            return Err(Error::ImmersionFailure { rank: rank_s, expected: s });
        }
        let mut generators = tangents;
        generators.extend(extra.iter().map(|d| d.value()));
        let (d_space, rank) = orthonormalize(n, &generators, tol);
        if rank < m {
            return Err(Error::DistributionRankFailure { rank, expected: m });
        }
        let e = d_space.into_basis();

        let mut all = e.clone();
        all.extend((0..n).map(|k| Vector::basis(n, k)));
        let (full, _) = orthonormalize(n, &all, tol);
        let normals: Vec<Vector<T>> = full.basis()[m..m + c].to_vec();

        let raw = Vector::new(nstar.iter().map(|x| x.eval(a)).collect::<Result<Vec<T>, _>>()?);
        let mut proj = Vector::zeros(n);
        for nb in &normals {
            proj.axpy(nb.dot(&raw), nb);
        }
        let norm = proj.norm();
        if norm < T::lit(NORMAL_SECTION_MIN) {
            return Err(Error::NormalSectionVanishes { norm: norm.as_f64() });
        }
        let nstar_unit = proj.scale(T::one() / norm);

        // generators = E R with R upper triangular
        let mut r = Matrix::zeros(m, m);
        for k in 0..m {
            for l in k..m {
                r[(k, l)] = e[k].dot(&generators[l]);
            }
        }
        let r_inv = r.upper_triangular_inverse().ok_or(Error::DistributionRankFailure { rank: m - 1, expected: m })?;

        // d/da_q of each generator
        let generator_derivs: Vec<Vec<Vector<T>>> = (0..m)
            .map(|l| {
                (0..s)
                    .map(|q| if l < s { xi.second(l, q) } else { extra[l - s].partial(q) })
                    .collect()
            })
            .collect();

        let frame = AdaptedFramePoint {
            a: a.to_vec(),
            p: xi.value(),
            e,
            n: normals,
            nstar_unit,
            jacobian_xi: xi.jacobian(),
        };
        Ok(FrameJets { frame, r_inv, generator_derivs })
    }
}

/// Orthonormal frame `(E_1..E_m, N_1..N_c)` at `xi(a)` with `E_1..E_s` spanning `T_pS`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedFramePoint<T> {
    pub a: Vec<T>,
    pub p: Vector<T>,
    pub e: Vec<Vector<T>>,
    pub n: Vec<Vector<T>>,
    pub nstar_unit: Vector<T>,
    pub jacobian_xi: Matrix<T>,
}

impl<T: Scalar> AdaptedFramePoint<T> {
    /// `D_p` as an orthonormal subspace.
    pub fn distribution(&self) -> crate::kernel::Subspace<T> {
        crate::kernel::Subspace::from_basis(self.p.dim(), self.e.clone(), true)
    }

    /// `T_pS` as an orthonormal subspace.
    pub fn tangent(&self, s: usize) -> crate::kernel::Subspace<T> {
        crate::kernel::Subspace::from_basis(self.p.dim(), self.e[..s].to_vec(), true)
    }

    /// `D_p^⊥` as an orthonormal subspace.
    pub fn normal_space(&self) -> crate::kernel::Subspace<T> {
        crate::kernel::Subspace::from_basis(self.p.dim(), self.n.clone(), true)
    }

    /// Ambient vector from `E`-coordinates.
    pub fn from_e_coords(&self, coeffs: &[T]) -> Vector<T> {
        Vector::combination(self.p.dim(), coeffs, &self.e)
    }

    /// `E`-coordinates of an ambient vector.
    pub fn e_coords(&self, v: &Vector<T>) -> Vec<T> {
        self.e.iter().map(|x| x.dot(v)).collect()
    }
}

/// Frame plus what is needed to differentiate sections along `S`.
#[derive(Debug, Clone)]
pub(crate) struct FrameJets<T> {
    pub frame: AdaptedFramePoint<T>,
    /// `E = G R^{-1}` for the generator matrix `G`.
    pub r_inv: Matrix<T>,
    /// `generator_derivs[l][q] = d g_l / d a_q`.
    pub generator_derivs: Vec<Vec<Vector<T>>>,
}

impl<T: Scalar> FrameJets<T> {
    /// Chart vector `u` with `J_xi u = E_i` (`i < s`).
    pub fn chart_direction(&self, i: usize, s: usize) -> Vec<T> {
        (0..s).map(|q| self.r_inv[(q, i)]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn close(v: &Vector<f64>, w: &[f64]) -> bool {
        v.iter().zip(w).all(|(x, y)| (x - y).abs() < 1e-14)
    }

    #[test]
    fn cylinder_frame_at_zero() {
        let f = cylinder().adapted_frame(&[0.0_f64]).unwrap();
        assert!(close(&f.e[0], &[0.0, 1.0, 0.0]));
        assert!(close(&f.e[1], &[0.0, 0.0, 1.0]));
        assert!(close(&f.n[0], &[1.0, 0.0, 0.0]));
        assert!(close(&f.nstar_unit, &[1.0, 0.0, 0.0]));
        assert!(close(&f.p, &[1.0, 0.0, 0.0]));
    }

    #[test]
    fn duplicate_generator_is_rank_failure() {
        let p = CauchyProblem::from_strings(
            Dims::new(1, 2, 1).unwrap(),
            &["cos(a1)", "sin(a1)", "0"],
            &[&["-sin(a1)", "cos(a1)", "0"]],
            &["cos(a1)", "sin(a1)", "0"],
            &[(-1.0, 1.0)],
        )
        .unwrap();
        assert!(matches!(p.adapted_frame(&[0.3_f64]), Err(Error::DistributionRankFailure { .. })));
    }

    #[test]
    fn tangent_section_vanishes() {
        let p = CauchyProblem::from_strings(
            Dims::new(1, 2, 1).unwrap(),
            &["cos(a1)", "sin(a1)", "0"],
            &[&["0", "0", "1"]],
            &["-sin(a1)", "cos(a1)", "0"],
            &[(-1.0, 1.0)],
        )
        .unwrap();
        assert!(matches!(p.adapted_frame(&[0.3_f64]), Err(Error::NormalSectionVanishes { .. })));
    }

    #[test]
    fn non_immersion() {
        let p = CauchyProblem::from_strings(
            Dims::new(1, 2, 1).unwrap(),
            &["a1^2", "0", "0"],
            &[&["0", "0", "1"]],
            &["0", "1", "0"],
            &[(-1.0, 1.0)],
        )
        .unwrap();
        assert!(matches!(p.adapted_frame(&[0.0_f64]), Err(Error::ImmersionFailure { rank: 0, expected: 1 })));
    }

    #[test]
    fn counts_are_validated() {
        let r = CauchyProblem::from_strings(
            Dims::new(1, 2, 1).unwrap(),
            &["cos(a1)", "sin(a1)"],
            &[&["0", "0", "1"]],
            &["1", "0", "0"],
            &[(-1.0, 1.0)],
        );
        assert!(matches!(r, Err(Error::InvalidProblem(_))));
        assert!(Domain::new(vec![(1.0, 1.0)]).is_err());
    }

    #[test]
    fn grid_is_lexicographic() {
        let d = Domain::new(vec![(0.0, 1.0), (0.0, 2.0)]).unwrap();
        let g = d.grid(3);
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], vec![0.0, 0.0]);
        assert_eq!(g[1], vec![0.0, 1.0]);
        assert_eq!(g[3], vec![0.5, 0.0]);
        assert_eq!(g[8], vec![1.0, 2.0]);
    }
}
