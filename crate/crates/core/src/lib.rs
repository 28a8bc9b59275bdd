//! Rank-`s` submanifolds of `R^(m+c)` through an `s`-dimensional submanifold `S`
//! with a prescribed tangent distribution `D` along it.
//!
//! The pipeline: expressions for `(S, D, N*)` → adapted frame and the map `phi`
//! ([`nullity`]) → ruling directions `X_j` ([`rulings`]) → the ruled extension
//! `sigma(a, b) = xi(a) + b^j X_j(a)` and its numerical certification
//! ([`extension`]). Everything numeric is generic over [`Scalar`] (`f32`, `f64`);
//! certification and file output work in `f64`.

pub mod cauchy;
pub mod error;
pub mod expr;
pub mod extension;
pub mod io;
pub mod kernel;
pub mod nullity;
pub mod rulings;
pub mod scalar;

pub use cauchy::{CauchyProblem, Domain};
pub use error::{Error, Result};
pub use kernel::Dims;
pub use scalar::Scalar;

pub type Vector64 = kernel::Vector<f64>;
pub type Matrix64 = kernel::Matrix<f64>;
pub type Subspace64 = kernel::Subspace<f64>;
pub type Jet64 = expr::Jet2<f64>;
pub type PhiData64 = nullity::PhiData<f64>;
pub type RulingFrame64 = rulings::RulingFrame<f64>;
pub type LocalSolution64 = extension::LocalSolution<f64>;

pub type Vector32 = kernel::Vector<f32>;
pub type Matrix32 = kernel::Matrix<f32>;
pub type Subspace32 = kernel::Subspace<f32>;
pub type Jet32 = expr::Jet2<f32>;
