use crate::scalar::Scalar;

use super::matrix::Matrix;
use super::svd::singular_values;
use super::vector::Vector;
use super::KernelError;

/// A linear subspace of `R^n` given by an ordered basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<T> {
    ambient: usize,
    basis: Vec<Vector<T>>,
    orthonormal: bool,
}

impl<T: Scalar> Subspace<T> {
    /// Wraps a basis without checking it. `orthonormal` is the caller's claim.
    pub fn from_basis(ambient: usize, basis: Vec<Vector<T>>, orthonormal: bool) -> Self {
        debug_assert!(basis.iter().all(|b| b.dim() == ambient));
        Self { ambient, basis, orthonormal }
    }

    /// Orthonormal basis of the span of `vectors`.
    pub fn span(ambient: usize, vectors: &[Vector<T>], tol: T) -> Self {
        orthonormalize(ambient, vectors, tol).0
    }

    pub fn empty(ambient: usize) -> Self {
        Self { ambient, basis: Vec::new(), orthonormal: true }
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector<T>] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<Vector<T>> {
        self.basis
    }

    pub fn is_orthonormal(&self) -> bool {
        self.orthonormal
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> T {
        let mut worst = T::zero();
        for (i, u) in self.basis.iter().enumerate() {
            for (j, w) in self.basis.iter().enumerate() {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((u.dot(w) - target).abs());
            }
        }
        worst
    }

    /// Orthogonal projection of `v` onto this (orthonormal) subspace.
    pub fn project(&self, v: &Vector<T>) -> Vector<T> {
        debug_assert!(self.orthonormal, "project requires an orthonormal basis");
        let mut out = Vector::zeros(self.ambient);
        for u in &self.basis {
            out.axpy(u.dot(v), u);
        }
        out
    }

    /// `v - project(v)`.
    pub fn residual(&self, v: &Vector<T>) -> Vector<T> {
        v - &self.project(v)
    }

    /// Coordinates `<v, u_i>` in the orthonormal basis.
    pub fn coordinates(&self, v: &Vector<T>) -> Vec<T> {
        self.basis.iter().map(|u| u.dot(v)).collect()
    }

    /// Ambient vector with the given basis coordinates.
    pub fn combine(&self, coeffs: &[T]) -> Vector<T> {
        Vector::combination(self.ambient, coeffs, &self.basis)
    }

    /// Basis vectors as the columns of an `ambient x dim` matrix.
    pub fn to_matrix(&self) -> Matrix<T> {
        if self.basis.is_empty() {
            return Matrix::zeros(self.ambient, 0);
        }
        Matrix::from_columns(&self.basis)
    }

    /// Orthonormal basis of the orthogonal complement in the ambient space.
    pub fn complement(&self, tol: T) -> Self {
        let n = self.ambient;
        let mut all: Vec<Vector<T>> = self.basis.clone();
        all.extend((0..n).map(|i| Vector::basis(n, i)));
        let (full, _) = orthonormalize(n, &all, tol);
        Self::from_basis(n, full.basis[self.dim()..].to_vec(), true)
    }
}

/// Modified Gram–Schmidt with one reorthogonalization pass.
///
/// A vector is dropped when its residual falls below `tol` relative to its own
/// norm (zero vectors are always dropped). Earlier inputs take priority.
pub fn orthonormalize<T: Scalar>(
    ambient: usize,
    vectors: &[Vector<T>],
    tol: T,
) -> (Subspace<T>, usize) {
    let mut basis: Vec<Vector<T>> = Vec::new();
    for v in vectors {
        assert_eq!(v.dim(), ambient, "orthonormalize: vector length mismatch");
        let scale = v.norm();
        if scale == T::zero() || !scale.is_finite() {
            continue;
        }
        let mut w = v.clone();
        for _pass in 0..2 {
            for b in &basis {
                let k = b.dot(&w);
                w.axpy(-k, b);
            }
        }
        let r = w.norm();
        if r < tol * scale || r == T::zero() {
            continue;
        }
        basis.push(w.scale(T::one() / r));
        if basis.len() == ambient {
            break;
        }
    }
    let rank = basis.len();
    (Subspace { ambient, basis, orthonormal: true }, rank)
}

/// Principal angles (ascending, radians in `[0, pi/2]`) between two orthonormal subspaces.
///
/// Small angles are recovered from sines and large ones from cosines so both ends
/// keep full relative accuracy.
pub fn principal_angles<T: Scalar>(u: &Subspace<T>, v: &Subspace<T>) -> Result<Vec<T>, KernelError> {
    if u.ambient() != v.ambient() {
        return Err(KernelError::DimensionMismatch { left: u.ambient(), right: v.ambient() });
    }
    let (big, small) = if u.dim() >= v.dim() { (u, v) } else { (v, u) };
    let l = small.dim();
    if l == 0 {
        return Ok(Vec::new());
    }
    let bm = big.to_matrix();
    let sm = small.to_matrix();
    // cosines: singular values of B^T S
    let cross = bm.transpose().matmul(&sm);
    let cosines = singular_values(&cross);
    // sines: singular values of (I - B B^T) S
    let proj = bm.matmul(&cross);
    let mut resid = sm.clone();
    for i in 0..resid.rows() {
        for j in 0..resid.cols() {
            resid[(i, j)] = sm[(i, j)] - proj[(i, j)];
        }
    }
    let mut sines = singular_values(&resid);
    sines.reverse();
    let half = T::lit(0.5);
    let mut angles: Vec<T> = (0..l)
        .map(|k| {
            let c = cosines.get(k).copied().unwrap_or(T::zero()).min(T::one()).max(T::zero());
            if c * c < half {
                c.acos()
            } else {
                let s = sines.get(k).copied().unwrap_or(T::zero()).min(T::one()).max(T::zero());
                s.asin()
            }
        })
        .map(|a| a.max(T::zero()).min(T::FRAC_PI_2()))
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(angles)
}

/// Largest principal angle, or zero when either subspace is trivial.
pub fn max_principal_angle<T: Scalar>(u: &Subspace<T>, v: &Subspace<T>) -> Result<T, KernelError> {
    Ok(principal_angles(u, v)?.last().copied().unwrap_or(T::zero()))
}

/// Orthogonal projection of `v` onto the orthonormal subspace `u`.
pub fn project<T: Scalar>(u: &Subspace<T>, v: &Vector<T>) -> Vector<T> {
    u.project(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector<f64> {
        Vector::from_f64(xs)
    }

    #[test]
    fn orthonormalize_axis_aligned() {
        let (sub, rank) = orthonormalize(3, &[v(&[1.0, 0.0, 0.0]), v(&[0.0, 2.0, 0.0])], 1e-10);
        assert_eq!(rank, 2);
        assert_eq!(sub.basis()[0].coords(), &[1.0, 0.0, 0.0]);
        assert_eq!(sub.basis()[1].coords(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn orthonormalize_drops_dependent() {
        let (sub, rank) = orthonormalize(3, &[v(&[1.0, 0.0, 0.0]), v(&[2.0, 0.0, 0.0])], 1e-10);
        assert_eq!(rank, 1);
        assert_eq!(sub.basis()[0].coords(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn orthonormalize_empty() {
        let (sub, rank) = orthonormalize::<f64>(4, &[], 1e-10);
        assert_eq!(rank, 0);
        assert_eq!(sub.dim(), 0);
    }

    #[test]
    fn angles_trivial_cases() {
        let e1 = v(&[1.0, 0.0, 0.0]);
        let e2 = v(&[0.0, 1.0, 0.0]);
        let u = Subspace::from_basis(3, vec![e1.clone(), e2.clone()], true);
        assert_eq!(principal_angles(&u, &u).unwrap(), vec![0.0, 0.0]);
        let a = Subspace::from_basis(3, vec![e1.clone()], true);
        let b = Subspace::from_basis(3, vec![e2], true);
        let ang = principal_angles(&a, &b).unwrap();
        assert!((ang[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        let t: f64 = 0.3;
        let r = Subspace::from_basis(3, vec![v(&[t.cos(), t.sin(), 0.0])], true);
        let ang = principal_angles(&a, &r).unwrap();
        assert!((ang[0] - t).abs() < 1e-15);
    }

    #[test]
    fn tiny_angles_are_resolved() {
        let t = 1e-12_f64;
        let a = Subspace::from_basis(2, vec![v(&[1.0, 0.0])], true);
        let b = Subspace::from_basis(2, vec![v(&[t.cos(), t.sin()])], true);
        let ang = principal_angles(&a, &b).unwrap();
        assert!((ang[0] - t).abs() < 1e-20);
    }

    #[test]
    fn ambient_mismatch() {
        let a = Subspace::<f64>::empty(2);
        let b = Subspace::<f64>::empty(3);
        assert!(principal_angles(&a, &b).is_err());
    }

    #[test]
    fn projection() {
        let u = Subspace::from_basis(3, vec![v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])], true);
        assert_eq!(u.project(&v(&[3.0, 4.0, 5.0])).coords(), &[3.0, 4.0, 0.0]);
        let c = u.complement(1e-10);
        assert_eq!(c.dim(), 1);
        assert!((c.basis()[0][2].abs() - 1.0).abs() < 1e-15);
    }
}
