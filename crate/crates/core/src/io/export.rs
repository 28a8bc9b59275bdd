use std::fmt::Write;

use crate::cauchy::CauchyProblem;
use crate::extension::Solution;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ObjError {
    #[error("OBJ export needs a surface in R^3 (m = 2, c = 1), got m = {m}, c = {c}")]
    UnsupportedDims { m: usize, c: usize },
}

fn join(out: &mut String, values: impl IntoIterator<Item = String>) {
    let mut first = true;
    for v in values {
        if !first {
            out.push(',');
        }
        out.push_str(&v);
        first = false;
    }
    out.push('\n');
}

/// `index, a_i, E{k}_{c}, phi{i}_{k}, X{j}_{c}`: one row per grid point.
pub fn rulings_csv(problem: &CauchyProblem, sol: &Solution) -> String {
    let d = problem.dims();
    let n = d.ambient();
    let mut out = String::new();
    let mut header = vec!["index".to_string()];
    header.extend((1..=d.s).map(|i| format!("a{i}")));
    for k in 1..=d.m {
        header.extend((1..=n).map(|c| format!("E{k}_{c}")));
    }
    for i in 1..=d.s {
        header.extend((1..=d.m).map(|k| format!("phi{i}_{k}")));
    }
    for j in 1..=d.fiber() {
        header.extend((1..=n).map(|c| format!("X{j}_{c}")));
    }
    join(&mut out, header);
    for (idx, l) in sol.locals.iter().enumerate() {
        let mut row = vec![idx.to_string()];
        row.extend(l.a.iter().map(|x| x.to_string()));
        row.extend(l.phi.frame.e.iter().flat_map(|e| e.iter().map(|x| x.to_string())));
        row.extend(l.phi.phi_star.as_slice().iter().map(|x| x.to_string()));
        row.extend(l.x.iter().flat_map(|x| x.iter().map(|v| v.to_string())));
        join(&mut out, row);
    }
    out
}

/// `a_index, b_index, a_i, b_j, x_c` with `x = sigma(a, b)`.
pub fn samples_csv(problem: &CauchyProblem, sol: &Solution) -> String {
    let d = problem.dims();
    let mut out = String::new();
    let mut header = vec!["a_index".to_string(), "b_index".to_string()];
    header.extend((1..=d.s).map(|i| format!("a{i}")));
    header.extend((1..=d.fiber()).map(|j| format!("b{j}")));
    header.extend((1..=d.ambient()).map(|c| format!("x{c}")));
    join(&mut out, header);
    for (ia, (l, pts)) in sol.locals.iter().zip(sol.points()).enumerate() {
        for (ib, (b, p)) in sol.b.iter().zip(pts).enumerate() {
            let mut row = vec![ia.to_string(), ib.to_string()];
            row.extend(l.a.iter().map(|x| x.to_string()));
            row.extend(b.iter().map(|x| x.to_string()));
            row.extend(p.iter().map(|x| x.to_string()));
            join(&mut out, row);
        }
    }
    out
}

/// `%.9g`-style formatting: nine significant digits, trailing zeros removed.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.8e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let fixed = format!("{:.*}", decimals, x);
        trim_zeros(&fixed)
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Vertices `sigma(a, b)` in sample order (grid point outer, `b` inner) and quad
/// faces over the `(a, b)` grid.
pub fn obj_mesh(problem: &CauchyProblem, sol: &Solution) -> Result<String, ObjError> {
    let d = problem.dims();
    if d.m != 2 || d.c != 1 {
        return Err(ObjError::UnsupportedDims { m: d.m, c: d.c });
    }
    let mut out = String::new();
    for pts in sol.points() {
        for p in pts {
            let coords: Vec<String> = p.iter().map(|&x| format_sig9(x)).collect();
            writeln!(out, "v {}", coords.join(" ")).expect("write to string");
        }
    }
    let (na, nb) = (sol.locals.len(), sol.b.len());
    let id = |i: usize, j: usize| i * nb + j + 1;
    for i in 0..na.saturating_sub(1) {
        for j in 0..nb.saturating_sub(1) {
            writeln!(out, "f {} {} {} {}", id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)).expect("write to string");
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig9() {
        assert_eq!(format_sig9(1.0), "1");
        assert_eq!(format_sig9(-0.0), "0");
        assert_eq!(format_sig9(0.1234567891234), "0.123456789");
        assert_eq!(format_sig9(123456789.4), "123456789");
        assert_eq!(format_sig9(1.5e-7), "1.5e-07");
        assert_eq!(format_sig9(2.0e12), "2e+12");
        assert_eq!(format_sig9(-0.25), "-0.25");
    }
}
