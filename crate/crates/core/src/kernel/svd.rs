//! One-sided Jacobi singular value decomposition and the rank test built on it.

use crate::scalar::Scalar;

use super::matrix::Matrix;
use super::vector::{dot, Vector};

const MAX_SWEEPS: usize = 80;

/// Thin SVD `A = U diag(sigma) V^T` of an `r x n` matrix.
///
/// `V` is always the full `n x n` orthogonal factor, so right singular vectors
/// for the zero singular values of a wide matrix are available (kernel basis).
#[derive(Debug, Clone)]
pub struct Svd<T> {
    /// Left singular vectors as columns (`r x n`); columns for zero singular values are zero.
    pub u: Matrix<T>,
    /// All `n` singular values in descending order (wide inputs contribute `n - r` exact zeros).
    pub sigma: Vec<T>,
    /// Right singular vectors as columns (`n x n`).
    pub v: Matrix<T>,
}

impl<T: Scalar> Svd<T> {
    pub fn new(a: &Matrix<T>) -> Self {
        let r = a.rows();
        let n = a.cols();
        // columns stored contiguously
        let mut w: Vec<Vec<T>> = (0..n).map(|j| a.column(j).into_coords()).collect();
        let mut v: Vec<Vec<T>> = (0..n).map(|j| Vector::<T>::basis(n, j).into_coords()).collect();
        let tol = T::EPS * T::lit(4.0);

        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let alpha = dot(&w[p], &w[p]);
                    let beta = dot(&w[q], &w[q]);
                    let gamma = dot(&w[p], &w[q]);
                    if gamma == T::zero() || gamma.abs() <= tol * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                    let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                    let c = T::one() / (T::one() + t * t).sqrt();
                    let s = c * t;
                    rotate(&mut w, p, q, c, s);
                    rotate(&mut v, p, q, c, s);
                }
            }
            if !rotated {
                break;
            }
        }

        let norms: Vec<T> = w.iter().map(|col| super::vector::norm(col)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));

        let mut u = Matrix::zeros(r, n);
        let mut vm = Matrix::zeros(n, n);
        let mut sigma = Vec::with_capacity(n);
        for (k, &j) in order.iter().enumerate() {
            let sv = norms[j];
            sigma.push(sv);
            if sv > T::zero() {
                for i in 0..r {
                    u[(i, k)] = w[j][i] / sv;
                }
            }
            for i in 0..n {
                vm[(i, k)] = v[j][i];
            }
        }
        Self { u, sigma, v: vm }
    }

    /// Singular values truncated to `min(rows, cols)`.
    pub fn values(&self) -> &[T] {
        let k = self.sigma.len().min(self.u.rows());
        &self.sigma[..k]
    }
}

fn rotate<T: Scalar>(cols: &mut [Vec<T>], p: usize, q: usize, c: T, s: T) {
    let (head, tail) = cols.split_at_mut(q);
    let cp = &mut head[p];
    let cq = &mut tail[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let xp = *x;
        let xq = *y;
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

/// Singular values of `a` in descending order (`min(rows, cols)` of them).
pub fn singular_values<T: Scalar>(a: &Matrix<T>) -> Vec<T> {
    if a.rows() < a.cols() {
        // cheaper to orthogonalize the shorter side
        Svd::new(&a.transpose()).values().to_vec()
    } else {
        Svd::new(a).values().to_vec()
    }
}

/// Count of singular values strictly above `tol * sigma_max`; zero for the zero matrix.
pub fn numerical_rank<T: Scalar>(a: &Matrix<T>, tol: T) -> usize {
    rank_from_values(&singular_values(a), tol)
}

pub(crate) fn rank_from_values<T: Scalar>(sv: &[T], tol: T) -> usize {
    let top = sv.iter().fold(T::zero(), |acc, &x| acc.max(x));
    if top == T::zero() {
        return 0;
    }
    sv.iter().filter(|&&x| x > tol * top).count()
}

/// Orthonormal basis (as columns of the returned vectors) of the kernel of `a`,
/// taken from right singular vectors with `sigma <= tol * sigma_max`.
pub fn kernel_basis<T: Scalar>(a: &Matrix<T>, tol: T) -> Vec<Vector<T>> {
    let n = a.cols();
    let svd = Svd::new(a);
    let top = svd.sigma.first().copied().unwrap_or(T::zero());
    (0..n)
        .filter(|&k| top == T::zero() || svd.sigma[k] <= tol * top)
        .map(|k| svd.v.column(k))
        .collect()
}
