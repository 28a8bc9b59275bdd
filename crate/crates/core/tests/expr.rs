use proptest::prelude::*;
use rankcauchy::expr::{parse, BinOp, EvalError, ExprAst, Func, Node, ParseError};

fn node(arity: usize) -> impl Strategy<Value = Node> {
    let leaf = prop_oneof![
        (-3.0..3.0f64).prop_map(Node::Const),
        (0..arity).prop_map(Node::Param),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|n| Node::Neg(Box::new(n))),
            (prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div)], inner.clone(), inner.clone())
                .prop_map(|(op, l, r)| Node::Binary(op, Box::new(l), Box::new(r))),
            (inner.clone(), -3i32..4).prop_map(|(n, k)| Node::Pow(Box::new(n), k)),
            (prop_oneof![Just(Func::Sin), Just(Func::Cos), Just(Func::Exp), Just(Func::Log), Just(Func::Sqrt), Just(Func::Tan)], inner)
                .prop_map(|(f, n)| Node::Call(f, Box::new(n))),
        ]
    })
}

/// Trees built from everywhere-smooth pieces: `x / (2 + sin y)`, `log(1 + x^2)`, ...
fn smooth(arity: usize) -> impl Strategy<Value = Node> {
    let leaf = prop_oneof![
        (-2.0..2.0f64).prop_map(Node::Const),
        (0..arity).prop_map(Node::Param),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let b = |n: Node| Box::new(n);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| Node::Binary(BinOp::Add, b(l), b(r))),
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| Node::Binary(BinOp::Mul, b(l), b(r))),
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| Node::Binary(
                BinOp::Div,
                b(l),
                b(Node::Binary(BinOp::Add, b(Node::Const(2.0)), b(Node::Call(Func::Sin, b(r))))),
            )),
            inner.clone().prop_map(move |n| Node::Call(Func::Sin, b(n))),
            inner.clone().prop_map(move |n| Node::Call(Func::Cos, b(n))),
            inner.clone().prop_map(move |n| Node::Call(Func::Exp, b(Node::Call(Func::Sin, b(n))))),
            inner.clone().prop_map(move |n| Node::Call(
                Func::Log,
                b(Node::Binary(BinOp::Add, b(Node::Const(1.0)), b(Node::Pow(b(n), 2)))),
            )),
            (inner, 2i32..4).prop_map(move |(n, k)| Node::Pow(b(n), k)),
        ]
    })
}

fn grad_fd(e: &ExprAst, x: &[f64], i: usize, h: f64) -> f64 {
    let at = |k: f64| {
        let mut p = x.to_vec();
        p[i] += k * h;
        e.eval(&p).unwrap()
    };
    (at(-2.0) - 8.0 * at(-1.0) + 8.0 * at(1.0) - at(2.0)) / (12.0 * h)
}

fn close(x: f64, y: f64, rel: f64) -> bool {
    (x - y).abs() <= rel * x.abs().max(y.abs()).max(1.0)
}

proptest! {
    #[test]
    fn print_parse_round_trip(root in node(3)) {
        let ast = ExprAst::new(root, 3).unwrap();
        let once = parse(&ast.to_string(), 3).unwrap();
        let twice = parse(&once.to_string(), 3).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(once.to_string(), twice.to_string());
        let p = [0.3_f64, -0.7, 1.1];
        match (ast.eval(&p), once.eval(&p)) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x.to_bits(), y.to_bits()),
            (Err(_), Err(_)) => {}
            (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
        }
    }

    #[test]
    fn jets_match_finite_differences(root in smooth(3), x in prop::collection::vec(-1.0..1.0f64, 3)) {
        let e = ExprAst::new(root, 3).unwrap();
        let jet = e.eval_jet2(&x).unwrap();
        prop_assert!(close(jet.value, e.eval(&x).unwrap(), 1e-14));
        for i in 0..3 {
            let fd = grad_fd(&e, &x, i, 1e-5);
            prop_assert!(close(jet.grad[i], fd, 1e-6), "d{} {} vs {}", i, jet.grad[i], fd);
            for j in 0..3 {
                let h = 1e-4;
                let g = |k: f64| {
                    let mut p = x.clone();
                    p[j] += k * h;
                    e.eval_jet2(&p).unwrap().grad[i]
                };
                let fd2 = (g(-2.0) - 8.0 * g(-1.0) + 8.0 * g(1.0) - g(2.0)) / (12.0 * h);
                prop_assert!(close(jet.hess(i, j), fd2, 1e-6), "d{}d{} {} vs {}", i, j, jet.hess(i, j), fd2);
            }
        }
    }

    #[test]
    fn parser_never_panics(text in "[a-z0-9+*/^() .-]{0,24}") {
        let _ = parse(&text, 2);
    }
}

#[test]
fn grammar_examples() {
    let e = parse("-a1^2 + 3*sin(a2)/2", 2).unwrap();
    assert_eq!(e.eval(&[2.0, 0.0]).unwrap(), -4.0);
    assert!(matches!(parse("a1^2^3", 1), Err(ParseError::Syntax { .. })));
    assert!(parse("a0", 1).is_err());
    assert!(matches!(parse("a2", 1), Err(ParseError::ParameterOutOfRange { .. })));
    assert!(matches!(parse("foo(a1)", 1), Err(ParseError::UnknownIdentifier { .. })));
    assert_eq!(parse("sin(a1", 1).unwrap_err().offset(), 7);
}

#[test]
fn domain_errors_name_the_subexpression() {
    let e = parse("1 + log(a1 - 2)", 1).unwrap();
    match e.eval(&[1.0_f64]) {
        Err(EvalError::Domain { function, subexpr, .. }) => {
            assert_eq!(function, "log");
            assert!(subexpr.contains("log"), "{subexpr}");
        }
        r => panic!("{r:?}"),
    }
    assert!(parse("1/(a1 - a1)", 1).unwrap().eval(&[0.5_f64]).is_err());
}

#[test]
fn single_precision_jets() {
    let e = parse("a1*a2 + cos(a1)", 2).unwrap();
    let j = e.eval_jet2(&[0.5f32, 2.0]).unwrap();
    assert!((j.grad[0] - (2.0 - 0.5f32.sin())).abs() < 1e-6);
    assert!((j.hess(0, 1) - 1.0).abs() < 1e-6);
}
