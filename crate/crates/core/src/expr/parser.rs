//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := "-" unary | power
//! power   := primary ("^" ["-"] integer)?
//! primary := number | param | func "(" expr ")" | "(" expr ")"
//! param   := "a" integer            (1 <= index <= s)
//! func    := "sin" | "cos" | "tan" | "exp" | "log" | "sqrt"
//! number  := digits ["." digits] [("e" | "E") ["+" | "-"] digits]
//! ```
//!
//! Offsets in errors are 1-based byte positions; end of input reports `len + 1`.

use super::ast::{BinOp, ExprAst, Func, Node};
use super::ParseError;

pub fn parse(text: &str, arity: usize) -> Result<ExprAst, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, arity };
    let root = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error_here(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(ExprAst::new(root, arity).expect("parser enforces parameter bound"))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    arity: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error_at(&self, pos: usize, message: String) -> ParseError {
        ParseError::Syntax { offset: pos + 1, message }
    }

    fn error_here(&self, message: String) -> ParseError {
        self.error_at(self.pos, message)
    }

    fn expect(&mut self, ch: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == ch => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error_here(format!("expected '{}', found '{}'", ch as char, c as char))),
            None => Err(self.error_here(format!("expected '{}', found end of input", ch as char))),
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.unary()?;
            // fold literal negation so printed negative constants round-trip
            return Ok(match inner {
                Node::Const(x) => Node::Const(-x),
                other => Node::Neg(Box::new(other)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.primary()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let start = {
            self.skip_ws();
            self.pos
        };
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        self.skip_ws();
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.error_at(start, "exponent must be a constant integer".into()));
        }
        if matches!(self.src.get(self.pos), Some(b'.') | Some(b'e') | Some(b'E')) {
            return Err(self.error_at(start, "exponent must be a constant integer".into()));
        }
        let text = std::str::from_utf8(&self.src[digits_start..self.pos]).unwrap();
        let mag: i32 = text
            .parse()
            .map_err(|_| self.error_at(start, "exponent out of range".into()))?;
        if self.peek() == Some(b'^') {
            return Err(self.error_here("chained '^' needs parentheses".into()));
        }
        let k = if negative { -mag } else { mag };
        Ok(Node::Pow(Box::new(base), k))
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        let c = match self.peek() {
            Some(c) => c,
            None => return Err(self.error_here("unexpected end of input".into())),
        };
        if c == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            self.expect(b')')?;
            return Ok(inner);
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.number();
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            return self.identifier();
        }
        Err(self.error_here(format!("unexpected '{}'", c as char)))
    }

    fn number(&mut self) -> Result<Node, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            return Err(self.error_at(start, "malformed number".into()));
        }
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
                return Err(self.error_at(save, "malformed exponent in number".into()));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let x: f64 = text.parse().map_err(|_| self.error_at(start, "malformed number".into()))?;
        if !x.is_finite() {
            return Err(self.error_at(start, "number out of range".into()));
        }
        Ok(Node::Const(x))
    }

    fn identifier(&mut self) -> Result<Node, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        if let Some(func) = Func::from_name(name) {
            self.expect(b'(')?;
            let arg = self.expr()?;
            self.expect(b')')?;
            return Ok(Node::Call(func, Box::new(arg)));
        }
        if let Some(idx) = name.strip_prefix('a') {
            if !idx.is_empty() && idx.bytes().all(|b| b.is_ascii_digit()) && !idx.starts_with('0') {
                let k: usize = idx.parse().unwrap_or(usize::MAX);
                if k > self.arity {
                    return Err(ParseError::ParameterOutOfRange {
                        offset: start + 1,
                        name: name.to_string(),
                        arity: self.arity,
                    });
                }
                return Ok(Node::Param(k - 1));
            }
        }
        Err(ParseError::UnknownIdentifier { offset: start + 1, name: name.to_string() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_root_is_plus() {
        let e = parse("cos(a1)*2 + a2^3", 2).unwrap();
        assert!(matches!(e.root(), Node::Binary(BinOp::Add, _, _)));
    }

    #[test]
    fn parameter_out_of_range() {
        let err = parse("a3", 2).unwrap_err();
        assert!(matches!(err, ParseError::ParameterOutOfRange { offset: 1, .. }));
        assert!(err.to_string().contains("parameter out of range"));
    }

    #[test]
    fn unclosed_call_offset() {
        let err = parse("sin(a1", 1).unwrap_err();
        assert_eq!(err.offset(), 7);
        assert!(err.to_string().starts_with("syntax error at offset 7"));
    }

    #[test]
    fn unary_minus_below_power() {
        // -a1^2 == -(a1^2)
        let e = parse("-a1^2", 1).unwrap();
        assert!(matches!(e.root(), Node::Neg(inner) if matches!(**inner, Node::Pow(_, 2))));
        let e = parse("-2", 1).unwrap();
        assert_eq!(e.root(), &Node::Const(-2.0));
    }

    #[test]
    fn left_associative() {
        let e = parse("a1 - a2 - 1", 2).unwrap();
        match e.root() {
            Node::Binary(BinOp::Sub, lhs, rhs) => {
                assert!(matches!(**lhs, Node::Binary(BinOp::Sub, _, _)));
                assert_eq!(**rhs, Node::Const(1.0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(parse("a1^2.5", 1).is_err());
        assert!(parse("a1^a1", 1).is_err());
        assert!(parse("abs(a1)", 1).is_err());
        assert!(parse("x + 1", 1).is_err());
        assert!(parse("a0", 1).is_err());
        assert!(parse("1 +", 1).is_err());
        assert!(parse("(a1))", 1).is_err());
        assert!(parse("2^3^2", 1).is_err());
        assert!(parse("1e999", 1).is_err());
        assert!(parse("", 1).is_err());
    }

    #[test]
    fn whitespace_insignificant() {
        assert_eq!(parse(" sin ( a1 ) *  2 ", 1).unwrap(), parse("sin(a1)*2", 1).unwrap());
        assert_eq!(parse("a1 ^ -2", 1).unwrap().root(), &Node::Pow(Box::new(Node::Param(0)), -2));
    }

    #[test]
    fn division_is_flagged() {
        assert!(parse("1/a1", 1).unwrap().has_division());
        assert!(parse("a1^-1", 1).unwrap().has_division());
        assert!(!parse("a1*a1", 1).unwrap().has_division());
    }
}
