use crate::scalar::Scalar;

use super::ast::{BinOp, ExprAst, Func, Node};
use super::jet::Jet2;
use super::EvalError;

impl ExprAst {
    /// Plain value at `point`.
    pub fn eval<T: Scalar>(&self, point: &[T]) -> Result<T, EvalError> {
        self.check_point(point.len())?;
        eval_value(self.root(), point)
    }

    /// Value, gradient and Hessian at `point`, propagated with jet arithmetic.
    pub fn eval_jet2<T: Scalar>(&self, point: &[T]) -> Result<Jet2<T>, EvalError> {
        self.check_point(point.len())?;
        eval_jet(self.root(), point)
    }

    fn check_point(&self, got: usize) -> Result<(), EvalError> {
        if got != self.arity() {
            return Err(EvalError::Arity { expected: self.arity(), got });
        }
        Ok(())
    }
}

fn domain(func: &str, node: &Node, arg: f64) -> EvalError {
    EvalError::Domain { function: func.to_string(), subexpr: node.to_string(), argument: arg }
}

fn finite<T: Scalar>(x: T, node: &Node) -> Result<T, EvalError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(EvalError::NonFinite { subexpr: node.to_string() })
    }
}

fn check_func<T: Scalar>(func: Func, node: &Node, x: T) -> Result<(), EvalError> {
    let bad = match func {
        Func::Log | Func::Sqrt => x <= T::zero(),
        Func::Tan => x.cos().abs() <= T::EPS,
        _ => false,
    };
    if bad {
        return Err(domain(func.name(), node, x.as_f64()));
    }
    Ok(())
}

fn apply<T: Scalar>(func: Func, x: T) -> T {
    match func {
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Tan => x.tan(),
        Func::Exp => x.exp(),
        Func::Log => x.ln(),
        Func::Sqrt => x.sqrt(),
    }
}

/// `(f, f', f'')` at `x`.
fn derivatives<T: Scalar>(func: Func, x: T) -> (T, T, T) {
    match func {
        Func::Sin => {
            let (s, c) = x.sin_cos();
            (s, c, -s)
        }
        Func::Cos => {
            let (s, c) = x.sin_cos();
            (c, -s, -c)
        }
        Func::Tan => {
            let t = x.tan();
            let sec2 = T::one() + t * t;
            (t, sec2, T::lit(2.0) * t * sec2)
        }
        Func::Exp => {
            let e = x.exp();
            (e, e, e)
        }
        Func::Log => {
            let r = T::one() / x;
            (x.ln(), r, -r * r)
        }
        Func::Sqrt => {
            let r = x.sqrt();
            let d1 = T::lit(0.5) / r;
            (r, d1, -d1 / (T::lit(2.0) * x))
        }
    }
}

fn eval_value<T: Scalar>(node: &Node, point: &[T]) -> Result<T, EvalError> {
    let out = match node {
        Node::Const(x) => T::lit(*x),
        Node::Param(i) => point[*i],
        Node::Neg(a) => -eval_value(a, point)?,
        Node::Binary(op, a, b) => {
            let x = eval_value(a, point)?;
            let y = eval_value(b, point)?;
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => {
                    if y == T::zero() {
                        return Err(domain("/", node, 0.0));
                    }
                    x / y
                }
            }
        }
        Node::Pow(a, k) => {
            let x = eval_value(a, point)?;
            if *k < 0 && x == T::zero() {
                return Err(domain("^", node, 0.0));
            }
            x.powi(*k)
        }
        Node::Call(func, a) => {
            let x = eval_value(a, point)?;
            check_func(*func, node, x)?;
            apply(*func, x)
        }
    };
    finite(out, node)
}

fn eval_jet<T: Scalar>(node: &Node, point: &[T]) -> Result<Jet2<T>, EvalError> {
    let n = point.len();
    let out = match node {
        Node::Const(x) => Jet2::constant(n, T::lit(*x)),
        Node::Param(i) => Jet2::variable(n, *i, point[*i]),
        Node::Neg(a) => eval_jet(a, point)?.neg(),
        Node::Binary(op, a, b) => {
            let x = eval_jet(a, point)?;
            let y = eval_jet(b, point)?;
            match op {
                BinOp::Add => x.add(&y),
                BinOp::Sub => x.sub(&y),
                BinOp::Mul => x.mul(&y),
                BinOp::Div => {
                    if y.value == T::zero() {
                        return Err(domain("/", node, 0.0));
                    }
                    x.div(&y)
                }
            }
        }
        Node::Pow(a, k) => {
            let x = eval_jet(a, point)?;
            if *k < 0 && x.value == T::zero() {
                return Err(domain("^", node, 0.0));
            }
            x.powi(*k)
        }
        Node::Call(func, a) => {
            let x = eval_jet(a, point)?;
            check_func(*func, node, x.value)?;
            let (f0, f1, f2) = derivatives(*func, x.value);
            x.chain(f0, f1, f2)
        }
    };
    let ok = out.value.is_finite()
        && out.grad.iter().all(|g| g.is_finite())
        && (0..n).all(|i| (i..n).all(|j| out.hess(i, j).is_finite()));
    if !ok {
        return Err(EvalError::NonFinite { subexpr: node.to_string() });
    }
    Ok(out)
}
