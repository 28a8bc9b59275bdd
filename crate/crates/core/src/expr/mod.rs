//! Expression language for analytic maps `R^s -> R`, with exact second-order
//! derivatives through jet arithmetic.
//!
//! The grammar is documented in [`parser`]; the canonical printer is the
//! `Display` impl of [`ExprAst`].

mod ast;
mod eval;
mod field;
mod jet;
pub mod parser;

pub use ast::{BinOp, ExprAst, Func, Node};
pub use field::FieldJet;
pub use jet::Jet2;
pub use parser::parse;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("parameter out of range at offset {offset}: {name} (s = {arity})")]
    ParameterOutOfRange { offset: usize, name: String, arity: usize },
    #[error("unknown identifier at offset {offset}: {name}")]
    UnknownIdentifier { offset: usize, name: String },
}

impl ParseError {
    /// 1-based byte position of the error.
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::ParameterOutOfRange { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("domain violation in {function} at {subexpr} (argument {argument})")]
    Domain { function: String, subexpr: String, argument: f64 },
    #[error("non-finite value at {subexpr}")]
    NonFinite { subexpr: String },
    #[error("expected {expected} parameters, got {got}")]
    Arity { expected: usize, got: usize },
}
