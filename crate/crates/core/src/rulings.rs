//! Ruling frames `X_1..X_{m-s}` spanning `F*_p = D_p ∩ phi_p(T_pS, N*_p)^⊥`.
//!
//! Three routes are provided and cross-checked: the iterated cross product
//! (reference), the cofactor/permutation formula, and a direct nullspace
//! computation of `D_p ∩ (Im phi_p)^⊥`.
//!
//! All coefficient vectors are `E`-coordinates in the adapted frame, whose
//! order `E_1..E_m` fixes the orientation of `D_p`.

use crate::error::{Error, Result};
use crate::kernel::{cross_product, kernel_basis, max_principal_angle, numerical_rank, Matrix, Subspace, Vector};
use crate::nullity::{AdaptedFramePoint, PhiData};
use crate::scalar::Scalar;

/// Rulings shorter than this (before normalization) signal a singular `A*`.
pub const DEGENERATE_RULING_NORM: f64 = 1e-10;
/// Largest `s` for which the cofactor route enumerates permutations.
pub const PERMUTATION_MAX_S: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RulingMethod {
    Cross,
    Cofactor,
    Oracle,
}

impl RulingMethod {
    pub fn name(self) -> &'static str {
        match self {
            RulingMethod::Cross => "cross",
            RulingMethod::Cofactor => "cofactor",
            RulingMethod::Oracle => "oracle",
        }
    }
}

/// Unit ruling vectors at one point of `S`.
#[derive(Debug, Clone)]
pub struct RulingFrame<T> {
    pub frame_point: AdaptedFramePoint<T>,
    /// Ambient coordinates.
    pub x: Vec<Vector<T>>,
    /// `(m - s) x m`, row `j` holds the `E`-coordinates of `X_j`.
    pub x_coeffs: Matrix<T>,
    pub method: RulingMethod,
}

impl<T: Scalar> RulingFrame<T> {
    fn from_coeffs(frame: &AdaptedFramePoint<T>, coeffs: Vec<Vector<T>>, method: RulingMethod) -> Self {
        let m = frame.e.len();
        let x = coeffs.iter().map(|c| frame.from_e_coords(c)).collect();
        let x_coeffs = if coeffs.is_empty() { Matrix::zeros(0, m) } else { Matrix::from_rows(&coeffs) };
        Self { frame_point: frame.clone(), x, x_coeffs, method }
    }

    pub fn span(&self) -> Subspace<T> {
        Subspace::span(self.frame_point.p.dim(), &self.x, T::lit(1e-9))
    }

    /// Flips each `X_j` whose inner product with `reference[j]` is negative.
    pub fn align_to(&mut self, reference: &[Vector<T>]) {
        for (j, r) in reference.iter().enumerate() {
            if self.x[j].dot(r) < T::zero() {
                self.x[j] = -self.x[j].clone();
                for k in 0..self.x_coeffs.cols() {
                    self.x_coeffs[(j, k)] = -self.x_coeffs[(j, k)];
                }
            }
        }
    }

    /// Residuals of the ruling-frame invariants against `pd`.
    pub fn invariants(&self, pd: &PhiData<T>) -> RulingInvariants<T> {
        let d = pd.frame.distribution();
        let s = pd.a_star.rows();
        let m = pd.frame.e.len();
        let in_distribution = self.x.iter().fold(T::zero(), |acc, x| acc.max(d.residual(x).norm()));
        let mut orthogonal_to_phi = T::zero();
        for x in &self.x {
            for i in 0..s {
                orthogonal_to_phi = orthogonal_to_phi.max(x.dot(&pd.phi_star_vector(i)).abs());
            }
        }
        let mut pairwise = T::zero();
        for (j, x) in self.x.iter().enumerate() {
            for y in &self.x[j + 1..] {
                pairwise = pairwise.max(x.dot(y).abs());
            }
        }
        let mut cols: Vec<Vector<T>> = pd.frame.e[..s].to_vec();
        cols.extend(self.x.iter().cloned());
        let transversal_rank = numerical_rank(&Matrix::from_columns(&cols), T::lit(1e-9));
        RulingInvariants { in_distribution, orthogonal_to_phi, pairwise, transversal_rank, expected_rank: m }
    }
}

/// Worst residuals of the ruling-frame invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RulingInvariants<T> {
    /// `max_j |X_j - π_D X_j|`
    pub in_distribution: T,
    /// `max_{i,j} |<X_j, phi(E_i, N*)>|`
    pub orthogonal_to_phi: T,
    /// `max_{j<k} |<X_j, X_k>|`
    pub pairwise: T,
    /// rank of `[E_1..E_s | X]`
    pub transversal_rank: usize,
    pub expected_rank: usize,
}

impl<T: Scalar> RulingInvariants<T> {
    pub fn hold(&self, tol: T) -> bool {
        self.in_distribution < tol
            && self.orthogonal_to_phi < tol
            && self.pairwise < tol
            && self.transversal_rank == self.expected_rank
    }
}

/// Unnormalized `X_j = phi_1 × ... × phi_s × E_{s+1} × ... × Ê_{s+j} × ... × E_m`
/// in `E`-coordinates, from the `s x m` matrix `phi_star`.
pub fn cross_rulings_raw<T: Scalar>(phi_star: &Matrix<T>) -> Vec<Vector<T>> {
    let s = phi_star.rows();
    let m = phi_star.cols();
    (0..m - s)
        .map(|j| {
            let mut args: Vec<Vector<T>> = (0..s).map(|i| Vector::new(phi_star.row(i).to_vec())).collect();
            args.extend((s..m).filter(|&k| k != s + j).map(|k| Vector::basis(m, k)));
            cross_product(&args).expect("arity fixed by construction")
        })
        .collect()
}

/// Unnormalized cofactor-formula rulings in `E`-coordinates.
///
/// For each `j` with `I = (1, ..., s, s+j)`, the coefficient of `E_i`
/// (`i` at 1-based position `h` in `I`) is `(-1)^h` times the minor of
/// `phi_star` on columns `I \ {i}`; rows `1..s` pair in order with the
/// remaining columns in increasing order. This is the expansion of
/// `det[phi_1|_I; ...; phi_s|_I; (E_k)_{k∈I}]` along its last row, up to
/// the global sign `(-1)^(s+1)`.
pub fn cofactor_rulings_raw<T: Scalar>(phi_star: &Matrix<T>) -> Vec<Vector<T>> {
    let s = phi_star.rows();
    let m = phi_star.cols();
    let rows: Vec<usize> = (0..s).collect();
    (0..m - s)
        .map(|j| {
            let index_set: Vec<usize> = (0..s).chain(std::iter::once(s + j)).collect();
            let mut out = Vector::zeros(m);
            for (pos, &i) in index_set.iter().enumerate() {
                let cols: Vec<usize> = index_set.iter().copied().filter(|&k| k != i).collect();
                let minor = if s <= PERMUTATION_MAX_S {
                    permutation_determinant(phi_star, &cols)
                } else {
                    phi_star.select(&rows, &cols).determinant()
                };
                let h = pos + 1;
                out[i] = if h % 2 == 0 { minor } else { -minor };
            }
            out
        })
        .collect()
}

/// `sum_λ sign(λ) prod_l a[l][cols[λ(l)]]` over all permutations (Heap's algorithm).
fn permutation_determinant<T: Scalar>(a: &Matrix<T>, cols: &[usize]) -> T {
    let n = cols.len();
    if n == 0 {
        return T::one();
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    let mut sign = T::one();
    let term = |perm: &[usize]| perm.iter().enumerate().fold(T::one(), |acc, (l, &p)| acc * a[(l, cols[p])]);
    let mut total = term(&perm);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            sign = -sign;
            total = total + sign * term(&perm);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    total
}

/// Unit normalization with the sign fixed so the first non-negligible coefficient is positive.
fn normalize_rulings<T: Scalar>(raw: Vec<Vector<T>>) -> Result<Vec<Vector<T>>> {
    raw.into_iter()
        .enumerate()
        .map(|(j, v)| {
            let norm = v.norm();
            if norm.is_nan() || norm < T::lit(DEGENERATE_RULING_NORM) {
                return Err(Error::DegenerateRuling { index: j + 1, norm: norm.as_f64() });
            }
            Ok(canonical_sign(v.scale(T::one() / norm)))
        })
        .collect()
}

pub(crate) fn canonical_sign<T: Scalar>(v: Vector<T>) -> Vector<T> {
    let cut = T::lit(1e-9) * v.max_abs();
    match v.iter().find(|x| x.abs() > cut) {
        Some(&x) if x < T::zero() => -v,
        _ => v,
    }
}

pub fn ruling_frame_cross<T: Scalar>(pd: &PhiData<T>) -> Result<RulingFrame<T>> {
    let coeffs = normalize_rulings(cross_rulings_raw(&pd.phi_star))?;
    Ok(RulingFrame::from_coeffs(&pd.frame, coeffs, RulingMethod::Cross))
}

pub fn ruling_frame_cofactor<T: Scalar>(pd: &PhiData<T>) -> Result<RulingFrame<T>> {
    let coeffs = normalize_rulings(cofactor_rulings_raw(&pd.phi_star))?;
    Ok(RulingFrame::from_coeffs(&pd.frame, coeffs, RulingMethod::Cofactor))
}

/// Orthonormal basis of `D_p ∩ (Im phi_p)^⊥`, the kernel of
/// `x ↦ (<x, phi(E_i, N_β)>)_{i,β}` on `D_p`.
pub fn fiber_nullspace_oracle<T: Scalar>(pd: &PhiData<T>, tol: T) -> Result<RulingFrame<T>> {
    let s = pd.a_star.rows();
    let m = pd.frame.e.len();
    let kernel = kernel_basis(&pd.stacked_full(), tol);
    if kernel.len() != m - s {
        return Err(Error::WrongFiberDimension { actual: kernel.len(), expected: m - s });
    }
    let coeffs = kernel.into_iter().map(canonical_sign).collect();
    Ok(RulingFrame::from_coeffs(&pd.frame, coeffs, RulingMethod::Oracle))
}

/// Largest principal angle between the spans of two ruling frames.
pub fn span_angle<T: Scalar>(a: &RulingFrame<T>, b: &RulingFrame<T>) -> T {
    max_principal_angle(&a.span(), &b.span()).unwrap_or(T::FRAC_PI_2())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_f64_rows(rows)
    }

    #[test]
    fn planar_cross_is_quarter_turn() {
        let raw = cross_rulings_raw(&m(&[&[1.0, 0.0]]));
        assert_eq!(raw.len(), 1);
        assert_eq!(raw[0].coords(), &[0.0, 1.0]);
    }

    #[test]
    fn s1_m3_cross_matches_hand_computation() {
        let (p1, p2, p3) = (0.7, -0.4, 1.3);
        let raw = cross_rulings_raw(&m(&[&[p1, p2, p3]]));
        // phi × e3 and phi × e2
        let x1 = [p2, -p1, 0.0];
        let x2 = [-p3, 0.0, p1];
        for (got, want) in raw.iter().zip([x1, x2]) {
            assert!(got.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-15), "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn s1_cofactor_reduction() {
        let phi = [0.7, -0.4, 1.3, 2.0];
        let raw = cofactor_rulings_raw(&m(&[&phi]));
        for (j, x) in raw.iter().enumerate() {
            let mut want = vec![0.0; 4];
            want[0] = -phi[1 + j];
            want[1 + j] = phi[0];
            assert_eq!(x.coords(), &want[..]);
        }
    }

    #[test]
    fn permutation_determinant_matches_lu() {
        let a = m(&[&[1.0, 2.0, 0.5, -1.0], &[0.3, -0.2, 1.1, 0.0], &[2.0, 0.1, -0.7, 0.4]]);
        let cols = [0, 2, 3];
        let lu = a.select(&[0, 1, 2], &cols).determinant();
        assert!((permutation_determinant(&a, &cols) - lu).abs() < 1e-14);
    }

    #[test]
    fn zero_row_degenerates() {
        let raw = cross_rulings_raw(&m(&[&[1.0, 0.0, 0.3], &[0.0, 0.0, 0.0]]));
        assert!(matches!(normalize_rulings(raw), Err(Error::DegenerateRuling { index: 1, .. })));
    }

    #[test]
    fn sign_convention() {
        let v = canonical_sign(Vector::<f64>::from_f64(&[0.0, -0.6, 0.8]));
        assert_eq!(v.coords(), &[0.0, 0.6, -0.8]);
    }
}
