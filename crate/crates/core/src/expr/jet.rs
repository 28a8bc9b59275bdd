//! Second-order forward-mode jets in `n` variables.

use crate::kernel::Matrix;
use crate::scalar::Scalar;

/// Value, gradient and Hessian of a scalar function of `n` variables.
///
/// The Hessian is stored as its packed upper triangle, so it is symmetric by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2<T> {
    pub value: T,
    pub grad: Vec<T>,
    hess: Vec<T>,
}

// Row i of the packed upper triangle starts at sum_{r<i} (n - r).
#[inline]
fn tri_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * i.saturating_sub(1) / 2 + (j - i)
}

impl<T: Scalar> Jet2<T> {
    pub fn constant(n: usize, value: T) -> Self {
        Self { value, grad: vec![T::zero(); n], hess: vec![T::zero(); n * (n + 1) / 2] }
    }

    /// The coordinate function `x_i` evaluated at `value`.
    pub fn variable(n: usize, i: usize, value: T) -> Self {
        let mut j = Self::constant(n, value);
        j.grad[i] = T::one();
        j
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.grad.len()
    }

    /// `d^2 f / dx_i dx_j`
    #[inline]
    pub fn hess(&self, i: usize, j: usize) -> T {
        self.hess[tri_index(self.nvars(), i, j)]
    }

    pub fn hessian(&self) -> Matrix<T> {
        let n = self.nvars();
        let mut h = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] = self.hess(i, j);
            }
        }
        h
    }

    /// Composition `f(self)` given `f`, `f'`, `f''` at `self.value`.
    pub fn chain(&self, f0: T, f1: T, f2: T) -> Self {
        let n = self.nvars();
        let grad = self.grad.iter().map(|&g| f1 * g).collect();
        let mut hess = Vec::with_capacity(self.hess.len());
        for i in 0..n {
            for j in i..n {
                let h = self.hess[tri_index(n, i, j)];
                hess.push(f1 * h + f2 * self.grad[i] * self.grad[j]);
            }
        }
        Self { value: f0, grad, hess }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self {
            value: self.value + rhs.value,
            grad: zip_map(&self.grad, &rhs.grad, |a, b| a + b),
            hess: zip_map(&self.hess, &rhs.hess, |a, b| a + b),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self {
            value: self.value - rhs.value,
            grad: zip_map(&self.grad, &rhs.grad, |a, b| a - b),
            hess: zip_map(&self.hess, &rhs.hess, |a, b| a - b),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            value: -self.value,
            grad: self.grad.iter().map(|&g| -g).collect(),
            hess: self.hess.iter().map(|&h| -h).collect(),
        }
    }

    pub fn scale(&self, k: T) -> Self {
        Self {
            value: self.value * k,
            grad: self.grad.iter().map(|&g| g * k).collect(),
            hess: self.hess.iter().map(|&h| h * k).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.nvars();
        let (u, v) = (self.value, rhs.value);
        let grad = zip_map(&self.grad, &rhs.grad, |a, b| u * b + v * a);
        let mut hess = Vec::with_capacity(self.hess.len());
        for i in 0..n {
            for j in i..n {
                let k = tri_index(n, i, j);
                hess.push(
                    u * rhs.hess[k]
                        + v * self.hess[k]
                        + self.grad[i] * rhs.grad[j]
                        + rhs.grad[i] * self.grad[j],
                );
            }
        }
        Self { value: u * v, grad, hess }
    }

    /// `1 / self`; caller guarantees a nonzero value.
    pub fn recip(&self) -> Self {
        let r = T::one() / self.value;
        self.chain(r, -r * r, T::lit(2.0) * r * r * r)
    }

    pub fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.recip())
    }

    /// Integer power; for `k < 0` the caller guarantees a nonzero value.
    pub fn powi(&self, k: i32) -> Self {
        match k {
            0 => Self::constant(self.nvars(), T::one()),
            1 => self.clone(),
            _ => {
                let u = self.value;
                let kf = T::lit(k as f64);
                let f0 = u.powi(k);
                let f1 = kf * u.powi(k - 1);
                let f2 = kf * T::lit((k - 1) as f64) * u.powi(k - 2);
                self.chain(f0, f1, f2)
            }
        }
    }
}

fn zip_map<T: Scalar>(a: &[T], b: &[T], f: impl Fn(T, T) -> T) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}
