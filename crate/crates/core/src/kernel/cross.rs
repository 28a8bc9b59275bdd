//! The `(m-1)`-fold vector cross product on an oriented `m`-dimensional space.
//!
//! Inputs and output are coordinate vectors in a fixed positively oriented
//! orthonormal basis. The product is characterized by
//! `<v_1 x ... x v_{m-1}, w> = det[v_1; ...; v_{m-1}; w]`.

use crate::scalar::Scalar;

use super::matrix::Matrix;
use super::svd::Svd;
use super::vector::Vector;
use super::KernelError;

/// Largest `m` evaluated through explicit cofactors.
pub const COFACTOR_MAX_DIM: usize = 8;

/// Cross product of `m - 1` coefficient vectors of length `m`.
pub fn cross_product<T: Scalar>(vectors: &[Vector<T>]) -> Result<Vector<T>, KernelError> {
    let m = check_args(vectors)?;
    if m <= COFACTOR_MAX_DIM {
        Ok(cofactor_path(vectors, m))
    } else {
        Ok(kernel_path(vectors, m))
    }
}

/// Cofactor expansion along the appended last row.
pub fn cross_product_cofactor<T: Scalar>(vectors: &[Vector<T>]) -> Result<Vector<T>, KernelError> {
    let m = check_args(vectors)?;
    Ok(cofactor_path(vectors, m))
}

/// Unit kernel vector of the stacked inputs, scaled by the volume and oriented.
pub fn cross_product_kernel<T: Scalar>(vectors: &[Vector<T>]) -> Result<Vector<T>, KernelError> {
    let m = check_args(vectors)?;
    Ok(kernel_path(vectors, m))
}

/// `det(<v_i, v_j>)`, the squared `(m-1)`-volume of the inputs.
pub fn gram_determinant<T: Scalar>(vectors: &[Vector<T>]) -> T {
    let k = vectors.len();
    let mut g = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            g[(i, j)] = vectors[i].dot(&vectors[j]);
        }
    }
    g.determinant()
}

/// Determinant of the square matrix whose rows are `rows`.
pub fn orientation<T: Scalar>(rows: &[Vector<T>]) -> T {
    Matrix::from_rows(rows).determinant()
}

fn check_args<T: Scalar>(vectors: &[Vector<T>]) -> Result<usize, KernelError> {
    let m = vectors.len() + 1;
    for v in vectors {
        if v.dim() != m {
            return Err(KernelError::CrossArity { expected: m, got: v.dim() });
        }
    }
    Ok(m)
}

fn cofactor_path<T: Scalar>(vectors: &[Vector<T>], m: usize) -> Vector<T> {
    if m == 1 {
        return Vector::basis(1, 0);
    }
    let a = Matrix::from_rows(vectors);
    let rows: Vec<usize> = (0..m - 1).collect();
    let mut out = Vector::zeros(m);
    for k in 0..m {
        let cols: Vec<usize> = (0..m).filter(|&j| j != k).collect();
        let minor = a.select(&rows, &cols).determinant();
        // last row index is m-1
        out[k] = if (m - 1 + k) % 2 == 0 { minor } else { -minor };
    }
    out
}

fn kernel_path<T: Scalar>(vectors: &[Vector<T>], m: usize) -> Vector<T> {
    if m == 1 {
        return Vector::basis(1, 0);
    }
    let a = Matrix::from_rows(vectors);
    let svd = Svd::new(&a);
    let volume = svd.sigma[..m - 1].iter().fold(T::one(), |acc, &x| acc * x);
    let top = svd.sigma[0];
    if top == T::zero() || svd.sigma[m - 2] <= T::EPS * T::lit(m as f64) * top {
        return Vector::zeros(m);
    }
    let k = svd.v.column(m - 1);
    let mut rows: Vec<Vector<T>> = vectors.to_vec();
    rows.push(k.clone());
    let sign = if orientation(&rows) < T::zero() { -T::one() } else { T::one() };
    k.scale(sign * volume)
}
