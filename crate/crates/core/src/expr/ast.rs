use std::fmt;

/// Elementary functions admitted by the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Sin, Func::Cos, Func::Tan, Func::Exp, Func::Log, Func::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

/// Expression tree node. Parameters are stored 0-based (`a1` is `Param(0)`).
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Param(usize),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Call(Func, Box<Node>),
}

impl Node {
    pub fn depth(&self) -> usize {
        match self {
            Node::Const(_) | Node::Param(_) => 1,
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => 1 + a.depth(),
            Node::Binary(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Highest parameter index referenced, 1-based (0 when none).
    pub fn max_param(&self) -> usize {
        match self {
            Node::Const(_) => 0,
            Node::Param(i) => i + 1,
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.max_param(),
            Node::Binary(_, a, b) => a.max_param().max(b.max_param()),
        }
    }

    pub fn has_division(&self) -> bool {
        match self {
            Node::Const(_) | Node::Param(_) => false,
            Node::Binary(BinOp::Div, _, _) => true,
            Node::Pow(_, k) if *k < 0 => true,
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.has_division(),
            Node::Binary(_, a, b) => a.has_division() || b.has_division(),
        }
    }
}

/// Canonical printer: every compound node is parenthesized, so the output
/// re-parses to the same tree.
impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Const(x) => {
                if x.is_sign_negative() {
                    write!(f, "({x:?})")
                } else {
                    write!(f, "{x:?}")
                }
            }
            Node::Param(i) => write!(f, "a{}", i + 1),
            Node::Neg(a) => write!(f, "(-{a})"),
            Node::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Node::Pow(a, k) => write!(f, "({a}^{k})"),
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

/// A parsed expression in the parameters `a1..as`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprAst {
    root: Node,
    arity: usize,
}

impl ExprAst {
    /// Wraps a tree; `None` if it references a parameter beyond `arity`.
    pub fn new(root: Node, arity: usize) -> Option<Self> {
        if root.max_param() > arity {
            return None;
        }
        Some(Self { root, arity })
    }

    pub fn constant(x: f64, arity: usize) -> Self {
        Self { root: Node::Const(x), arity }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Number of parameters `s`.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn has_division(&self) -> bool {
        self.root.has_division()
    }
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}
