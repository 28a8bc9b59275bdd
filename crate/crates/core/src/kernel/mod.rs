//! Dimension-generic dense linear algebra and exterior-algebra primitives.

mod cross;
mod dims;
mod matrix;
mod subspace;
mod svd;
mod vector;

pub use cross::{
    cross_product, cross_product_cofactor, cross_product_kernel, gram_determinant, orientation,
    COFACTOR_MAX_DIM,
};
pub use dims::Dims;
pub use matrix::Matrix;
pub use subspace::{max_principal_angle, orthonormalize, principal_angles, project, Subspace};
pub use svd::{kernel_basis, numerical_rank, singular_values, Svd};
pub use vector::Vector;

pub(crate) use svd::rank_from_values;

/// Default relative tolerance for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("invalid dimensions s={s}, m={m}, c={c}: need 1 <= s < m and c >= 1")]
    InvalidDims { s: usize, m: usize, c: usize },
    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("cross product on an {expected}-space takes vectors of length {expected}, got {got}")]
    CrossArity { expected: usize, got: usize },
}
