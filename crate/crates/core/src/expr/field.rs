use crate::kernel::{Matrix, Vector};
use crate::scalar::Scalar;

use super::{EvalError, ExprAst, Jet2};

/// Second-order jet of a vector-valued map `R^s -> R^n`, one [`Jet2`] per component.
#[derive(Debug, Clone)]
pub struct FieldJet<T> {
    comps: Vec<Jet2<T>>,
}

impl<T: Scalar> FieldJet<T> {
    pub fn evaluate(exprs: &[ExprAst], point: &[T]) -> Result<Self, EvalError> {
        let comps = exprs.iter().map(|e| e.eval_jet2(point)).collect::<Result<_, _>>()?;
        Ok(Self { comps })
    }

    pub fn components(&self) -> &[Jet2<T>] {
        &self.comps
    }

    pub fn value(&self) -> Vector<T> {
        Vector::new(self.comps.iter().map(|j| j.value).collect())
    }

    /// `d/da_i`
    pub fn partial(&self, i: usize) -> Vector<T> {
        Vector::new(self.comps.iter().map(|j| j.grad[i]).collect())
    }

    /// `d^2/da_i da_j`
    pub fn second(&self, i: usize, j: usize) -> Vector<T> {
        Vector::new(self.comps.iter().map(|c| c.hess(i, j)).collect())
    }

    /// `sum_i u_i d/da_i`
    pub fn directional(&self, u: &[T]) -> Vector<T> {
        Vector::new(
            self.comps
                .iter()
                .map(|c| c.grad.iter().zip(u).fold(T::zero(), |acc, (&g, &w)| acc + g * w))
                .collect(),
        )
    }

    /// `n x s` Jacobian.
    pub fn jacobian(&self) -> Matrix<T> {
        let n = self.comps.len();
        let s = self.comps.first().map_or(0, |j| j.nvars());
        let mut m = Matrix::zeros(n, s);
        for (r, c) in self.comps.iter().enumerate() {
            for k in 0..s {
                m[(r, k)] = c.grad[k];
            }
        }
        m
    }
}
