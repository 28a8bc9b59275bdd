//! The parametrization `sigma(a, b) = xi(a) + sum_j b^j X_j(a)` near one chart
//! point, with the first and second derivatives needed to measure its tangent
//! spaces and second fundamental form.
//!
//! `xi` is differentiated exactly through jets. `X_j` is defined pointwise by
//! linear algebra, so its chart derivatives come from five-point stencils.

use crate::cauchy::CauchyProblem;
use crate::error::{Error, Result};
use crate::expr::FieldJet;
use crate::kernel::{max_principal_angle, numerical_rank, orthonormalize, singular_values, Matrix, Subspace, Vector};
use crate::nullity::PhiData;
use crate::rulings::ruling_frame_cross;
use crate::scalar::Scalar;

/// Default step of the ruling-derivative stencils.
pub const DEFAULT_FD_STEP: f64 = 1e-3;
/// Relative singular value under which the `sigma`-Jacobian is rank deficient.
pub const IMMERSION_TOL: f64 = 1e-9;

/// How rulings are produced at arbitrary chart points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RulingOptions<T> {
    pub fd_step: T,
    /// Replace `X_1` by `X_1 + eps * phi(E_1, N*)` (negative control).
    pub perturbation: Option<T>,
}

impl<T: Scalar> Default for RulingOptions<T> {
    fn default() -> Self {
        Self { fd_step: T::lit(DEFAULT_FD_STEP), perturbation: None }
    }
}

/// Unit cross-product rulings at `a` in ambient coordinates, optionally perturbed.
pub fn ruling_field<T: Scalar>(problem: &CauchyProblem, a: &[T], opts: &RulingOptions<T>) -> Result<Vec<Vector<T>>> {
    let pd = problem.phi_data(a)?;
    rulings_from_phi(&pd, opts)
}

fn rulings_from_phi<T: Scalar>(pd: &PhiData<T>, opts: &RulingOptions<T>) -> Result<Vec<Vector<T>>> {
    let mut x = ruling_frame_cross(pd)?.x;
    if let Some(eps) = opts.perturbation {
        let bump = pd.phi_star_vector(0).scale(eps);
        x[0] += &bump;
    }
    Ok(x)
}

/// `xi(a) + sum_j b_j X_j`
pub fn sigma<T: Scalar>(xi_a: &Vector<T>, rulings: &[Vector<T>], b: &[T]) -> Vector<T> {
    let mut p = xi_a.clone();
    for (x, &bj) in rulings.iter().zip(b) {
        p.axpy(bj, x);
    }
    p
}

const D1: [(f64, f64); 4] = [(-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0)];
const D2: [(f64, f64); 5] =
    [(-2.0, -1.0 / 12.0), (-1.0, 16.0 / 12.0), (0.0, -30.0 / 12.0), (1.0, 16.0 / 12.0), (2.0, -1.0 / 12.0)];

/// `sigma` and its derivatives at a fixed chart point `a`, for any `b`.
#[derive(Debug, Clone)]
pub struct LocalSolution<T> {
    pub a: Vec<T>,
    pub s: usize,
    pub m: usize,
    pub xi: FieldJet<T>,
    pub phi: PhiData<T>,
    /// `X_j(a)`
    pub x: Vec<Vector<T>>,
    /// `dx[j][i] = ∂_i X_j`
    pub dx: Vec<Vec<Vector<T>>>,
    /// `ddx[j][i][l] = ∂_i ∂_l X_j`
    pub ddx: Vec<Vec<Vec<Vector<T>>>>,
}

impl<T: Scalar> LocalSolution<T> {
    pub fn new(problem: &CauchyProblem, a: &[T], opts: &RulingOptions<T>) -> Result<Self> {
        problem.check_point(a)?;
        let dims = problem.dims();
        let (s, m) = (dims.s, dims.m);
        let n = dims.ambient();
        let xi = FieldJet::evaluate(problem.xi(), a)?;
        let phi = problem.phi_data(a)?;
        let x = rulings_from_phi(&phi, opts)?;
        let h = opts.fd_step;
        let fiber = x.len();

        let at = |offsets: &[(usize, T)]| -> Result<Vec<Vector<T>>> {
            let mut p = a.to_vec();
            for &(axis, k) in offsets {
                p[axis] = p[axis] + k * h;
            }
            let mut xs = ruling_field(problem, &p, opts)?;
            for (v, r) in xs.iter_mut().zip(&x) {
                if v.dot(r) < T::zero() {
                    *v = -v.clone();
                }
            }
            Ok(xs)
        };

        // first derivatives
        let mut dx = vec![vec![Vector::zeros(n); s]; fiber];
        for i in 0..s {
            for &(k, w) in &D1 {
                let xs = at(&[(i, T::lit(k))])?;
                for j in 0..fiber {
                    dx[j][i].axpy(T::lit(w) / h, &xs[j]);
                }
            }
        }

        // second derivatives, symmetric by construction
        let mut ddx = vec![vec![vec![Vector::zeros(n); s]; s]; fiber];
        for i in 0..s {
            for &(k, w) in &D2 {
                let xs = if k == 0.0 { x.clone() } else { at(&[(i, T::lit(k))])? };
                for j in 0..fiber {
                    ddx[j][i][i].axpy(T::lit(w) / (h * h), &xs[j]);
                }
            }
            for l in i + 1..s {
                for &(ki, wi) in &D1 {
                    for &(kl, wl) in &D1 {
                        let xs = at(&[(i, T::lit(ki)), (l, T::lit(kl))])?;
                        for j in 0..fiber {
                            ddx[j][i][l].axpy(T::lit(wi * wl) / (h * h), &xs[j]);
                        }
                    }
                }
                for j in 0..fiber {
                    ddx[j][l][i] = ddx[j][i][l].clone();
                }
            }
        }
        Ok(Self { a: a.to_vec(), s, m, xi, phi, x, dx, ddx })
    }

    pub fn ambient(&self) -> usize {
        self.xi.components().len()
    }

    pub fn point(&self, b: &[T]) -> Vector<T> {
        sigma(&self.xi.value(), &self.x, b)
    }

    /// Columns `∂_{a_i} sigma` then `∂_{b_j} sigma`.
    pub fn jacobian(&self, b: &[T]) -> Matrix<T> {
        let mut cols: Vec<Vector<T>> = (0..self.s)
            .map(|i| {
                let mut c = self.xi.partial(i);
                for (j, &bj) in b.iter().enumerate() {
                    c.axpy(bj, &self.dx[j][i]);
                }
                c
            })
            .collect();
        cols.extend(self.x.iter().cloned());
        Matrix::from_columns(&cols)
    }

    /// `∂_p ∂_q sigma` in the coordinates `(a_1..a_s, b_1..b_{m-s})`.
    pub fn second(&self, b: &[T], p: usize, q: usize) -> Vector<T> {
        let (p, q) = if p <= q { (p, q) } else { (q, p) };
        let s = self.s;
        if q < s {
            let mut v = self.xi.second(p, q);
            for (j, &bj) in b.iter().enumerate() {
                v.axpy(bj, &self.ddx[j][p][q]);
            }
            v
        } else if p < s {
            self.dx[q - s][p].clone()
        } else {
            Vector::zeros(self.ambient())
        }
    }

    /// Orthonormalized span of the partial derivatives of `sigma` (columns in fixed order).
    pub fn tangent_space(&self, b: &[T]) -> Result<Subspace<T>> {
        let jac = self.jacobian(b);
        check_immersion(&jac)?;
        Ok(orthonormalize(self.ambient(), &jac.columns(), T::lit(IMMERSION_TOL)).0)
    }

    fn second_order(&self, b: &[T], tol: T) -> Result<SecondOrder<T>> {
        second_order_data(&self.jacobian(b).columns(), |p, q| self.second(b, p, q), tol)
    }

    /// Second fundamental form and nullity at `(a, b)`.
    pub fn sample(&self, b: &[T], tol: T) -> Result<ExtensionSample<T>> {
        let so = self.second_order(b, tol)?;
        Ok(ExtensionSample {
            a: self.a.clone(),
            b: b.to_vec(),
            point: self.point(b),
            tangent: so.tangent,
            second_form: so.forms,
            nullity_index: so.nullity_index,
            min_nonzero_sv: so.min_nonzero_sv,
            max_null_sv: so.max_null_sv,
            spectrum: so.spectrum,
        })
    }

    /// `<alpha(v_i, v_k), normal>` at `(a, b)` for tangent vectors `v`.
    pub fn shape_operator_along(&self, b: &[T], vectors: &[Vector<T>], normal: &Vector<T>) -> Result<Matrix<T>> {
        let m = self.m;
        let so = self.second_order(b, T::lit(IMMERSION_TOL))?;
        // chart coordinates of each vector: R^{-1} E'^T v
        let coords: Vec<Vector<T>> = vectors.iter().map(|v| so.r_inv.mul_vec(&so.tangent.coordinates(v))).collect();
        let mut form = Matrix::zeros(m, m);
        for p in 0..m {
            for q in 0..m {
                form[(p, q)] = self.second(b, p, q).dot(normal);
            }
        }
        let k = vectors.len();
        let mut out = Matrix::zeros(k, k);
        for i in 0..k {
            let fi = form.mul_vec(&coords[i]);
            for l in 0..k {
                out[(i, l)] = fi.dot(&coords[l]);
            }
        }
        Ok(out)
    }

    /// Largest `|∂_i X_j|`.
    pub fn max_ruling_derivative(&self) -> T {
        self.dx.iter().flatten().fold(T::zero(), |acc, v| acc.max(v.norm()))
    }

    /// Smallest singular value of the `sigma` Jacobian at `b = 0`.
    pub fn jacobian_sigma_min(&self) -> T {
        let zero = vec![T::zero(); self.x.len()];
        singular_values(&self.jacobian(&zero)).last().copied().unwrap_or(T::zero())
    }
}

/// Jacobian rank relative to its largest singular value.
fn check_immersion<T: Scalar>(jac: &Matrix<T>) -> Result<()> {
    let rank = numerical_rank(jac, T::lit(IMMERSION_TOL));
    if rank < jac.cols() {
        return Err(Error::ImmersionFailure { rank, expected: jac.cols() });
    }
    Ok(())
}

/// Second fundamental form of a parametrization at one point.
#[derive(Debug, Clone)]
pub struct SecondOrder<T> {
    /// Orthonormalized Jacobian columns, in order.
    pub tangent: Subspace<T>,
    pub normal: Subspace<T>,
    /// Jacobian `= E' R`; this is `R^{-1}`.
    pub r_inv: Matrix<T>,
    /// `forms[β][(i, l)] = <alpha(E'_i, E'_l), N'_β>`.
    pub forms: Vec<Matrix<T>>,
    pub nullity_index: usize,
    /// Singular values of `B[i, (l, β)]`, descending.
    pub spectrum: Vec<T>,
    pub min_nonzero_sv: T,
    pub max_null_sv: T,
}

/// Second fundamental form and index of relative nullity from the first
/// (`columns`) and second (`second(p, q)`) partials of a parametrization.
/// `tol` is the relative rank cutoff on the singular values of `B`.
pub fn second_order_data<T: Scalar>(
    columns: &[Vector<T>],
    second: impl Fn(usize, usize) -> Vector<T>,
    tol: T,
) -> Result<SecondOrder<T>> {
    let m = columns.len();
    let n = columns.first().map_or(0, Vector::dim);
    check_immersion(&Matrix::from_columns(columns))?;
    let (tangent, _) = orthonormalize(n, columns, T::lit(IMMERSION_TOL));
    let normal = tangent.complement(T::lit(IMMERSION_TOL));
    let e = tangent.basis();
    let mut r = Matrix::zeros(m, m);
    for k in 0..m {
        for l in k..m {
            r[(k, l)] = e[k].dot(&columns[l]);
        }
    }
    let r_inv = r.upper_triangular_inverse().ok_or(Error::ImmersionFailure { rank: m - 1, expected: m })?;
    let seconds: Vec<Vec<Vector<T>>> = (0..m).map(|p| (0..m).map(|q| second(p, q)).collect()).collect();
    let mut forms = Vec::with_capacity(normal.dim());
    for nb in normal.basis() {
        let mut coord = Matrix::zeros(m, m);
        for p in 0..m {
            for q in 0..m {
                coord[(p, q)] = seconds[p][q].dot(nb);
            }
        }
        // B_E = R^{-T} B R^{-1}
        forms.push(r_inv.transpose().matmul(&coord).matmul(&r_inv));
    }
    let mut big = Matrix::zeros(m, m * forms.len());
    for (beta, form) in forms.iter().enumerate() {
        for i in 0..m {
            for l in 0..m {
                big[(i, beta * m + l)] = form[(i, l)];
            }
        }
    }
    let mut spectrum = singular_values(&big);
    spectrum.resize(m, T::zero());
    let rank_b = crate::kernel::rank_from_values(&spectrum, tol);
    let min_nonzero_sv = if rank_b > 0 { spectrum[rank_b - 1] } else { T::zero() };
    let max_null_sv = spectrum.get(rank_b).copied().unwrap_or(T::zero());
    Ok(SecondOrder { tangent, normal, r_inv, forms, nullity_index: m - rank_b, spectrum, min_nonzero_sv, max_null_sv })
}

/// Second-order data of the solution at one `(a, b)`.
#[derive(Debug, Clone)]
pub struct ExtensionSample<T> {
    pub a: Vec<T>,
    pub b: Vec<T>,
    pub point: Vector<T>,
    pub tangent: Subspace<T>,
    /// One symmetric `m x m` block per normal direction, in an orthonormal tangent frame.
    pub second_form: Vec<Matrix<T>>,
    pub nullity_index: usize,
    pub min_nonzero_sv: T,
    pub max_null_sv: T,
    pub spectrum: Vec<T>,
}

impl<T: Scalar> ExtensionSample<T> {
    /// `max_null_sv / min_nonzero_sv` (zero when there is no null part).
    pub fn gap_ratio(&self) -> T {
        if self.min_nonzero_sv > T::zero() {
            self.max_null_sv / self.min_nonzero_sv
        } else if self.max_null_sv == T::zero() {
            T::zero()
        } else {
            T::infinity()
        }
    }

    pub fn symmetry_defect(&self) -> T {
        let mut worst = T::zero();
        for f in &self.second_form {
            for i in 0..f.rows() {
                for j in 0..f.cols() {
                    worst = worst.max((f[(i, j)] - f[(j, i)]).abs());
                }
            }
        }
        worst
    }
}

impl CauchyProblem {
    /// Tangent space of the solution at `(a, b)`; `h` is the ruling-derivative step.
    pub fn tangent_space<T: Scalar>(&self, a: &[T], b: &[T], h: T) -> Result<Subspace<T>> {
        let opts = RulingOptions { fd_step: h, perturbation: None };
        LocalSolution::new(self, a, &opts)?.tangent_space(b)
    }

    /// Largest principal angle between the tangent spaces at `(a, b)` and `(a, 0)`
    /// over the given `b` samples.
    pub fn verify_constant_tangent<T: Scalar>(&self, a: &[T], b_samples: &[Vec<T>]) -> Result<T> {
        let local = LocalSolution::new(self, a, &RulingOptions::default())?;
        constant_tangent_angle(&local, b_samples)
    }

    /// Index of relative nullity `m - rank(B)` at `(a, b)` and the singular values of `B`.
    pub fn relative_nullity_index<T: Scalar>(&self, a: &[T], b: &[T], tol: T) -> Result<(usize, Vec<T>)> {
        let local = LocalSolution::new(self, a, &RulingOptions::default())?;
        let sample = local.sample(b, tol)?;
        Ok((sample.nullity_index, sample.spectrum))
    }
}

pub(crate) fn constant_tangent_angle<T: Scalar>(local: &LocalSolution<T>, b_samples: &[Vec<T>]) -> Result<T> {
    let zero = vec![T::zero(); local.x.len()];
    let base = local.tangent_space(&zero)?;
    let mut worst = T::zero();
    for b in b_samples {
        let t = local.tangent_space(b)?;
        worst = worst.max(max_principal_angle(&base, &t)?);
    }
    Ok(worst)
}
