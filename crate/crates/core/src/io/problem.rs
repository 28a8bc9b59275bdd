use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cauchy::{CauchyProblem, Domain};
use crate::expr::{parse, ExprAst, ParseError};
use crate::extension::{CertifyConfig, Tolerances};
use crate::kernel::Dims;

pub const FORMAT_VERSION: u32 = 1;

/// On-disk form of a Cauchy problem; expressions are DSL strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub format_version: u32,
    pub dims: Dims,
    pub domain: Vec<(f64, f64)>,
    pub xi: Vec<String>,
    pub d_extra: Vec<Vec<String>>,
    pub nstar: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nstar_alt: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridOverrides>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_axis: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Json { path: String, message: String },
    #[error("{field}: {message}")]
    Schema { field: String, message: String },
    #[error("{field}: {source}")]
    Expr { field: String, source: ParseError },
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Schema { field: field.into(), message: message.into() }
}

/// A validated problem together with its file-level settings.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedProblem {
    pub problem: CauchyProblem,
    pub file: ProblemFile,
    /// SHA-256 of the file bytes.
    pub digest: String,
}

impl LoadedProblem {
    /// Certification settings with the file's overrides applied.
    pub fn config(&self) -> CertifyConfig {
        let mut c = CertifyConfig { digest: Some(self.digest.clone()), ..CertifyConfig::default() };
        if let Some(t) = self.file.tolerances {
            c.tolerances = t;
        }
        if let Some(g) = self.file.grid {
            c.grid = g.per_axis.unwrap_or(c.grid);
            c.b_points = g.b_points.unwrap_or(c.b_points);
            c.b_max = g.b_max.or(c.b_max);
            c.fd_step = g.fd_step.unwrap_or(c.fd_step);
        }
        c
    }
}

pub fn load(path: impl AsRef<Path>) -> Result<LoadedProblem, IoError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| IoError::Read { path: path.to_path_buf(), source })?;
    let text = String::from_utf8(bytes).map_err(|_| schema("$", "file is not UTF-8"))?;
    parse_problem(&text)
}

pub fn parse_problem(text: &str) -> Result<LoadedProblem, IoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ProblemFile = serde_path_to_error::deserialize(de).map_err(|e| IoError::Json {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    let problem = build(&file)?;
    Ok(LoadedProblem { problem, file, digest: file_digest(text.as_bytes()) })
}

fn build(file: &ProblemFile) -> Result<CauchyProblem, IoError> {
    if file.format_version != FORMAT_VERSION {
        return Err(schema("format_version", format!("unsupported version {}", file.format_version)));
    }
    let Dims { s, m, c } = file.dims;
    let dims = Dims::new(s, m, c).map_err(|e| schema("dims", e.to_string()))?;
    let n = dims.ambient();
    if file.domain.len() != s {
        return Err(schema("domain", format!("expected {s} intervals, got {}", file.domain.len())));
    }
    for (k, &(lo, hi)) in file.domain.iter().enumerate() {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(schema(format!("domain[{k}]"), format!("interval [{lo}, {hi}] is empty")));
        }
    }
    let field = |name: &str, xs: &[String]| -> Result<Vec<ExprAst>, IoError> {
        if xs.len() != n {
            return Err(schema(name, format!("expected {n} components (m + c), got {}", xs.len())));
        }
        xs.iter()
            .enumerate()
            .map(|(k, t)| parse(t, s).map_err(|source| IoError::Expr { field: format!("{name}[{k}]"), source }))
            .collect()
    };
    let xi = field("xi", &file.xi)?;
    if file.d_extra.len() != dims.fiber() {
        return Err(schema("d_extra", format!("expected {} fields (m - s), got {}", dims.fiber(), file.d_extra.len())));
    }
    let d_extra = file
        .d_extra
        .iter()
        .enumerate()
        .map(|(j, d)| field(&format!("d_extra[{j}]"), d))
        .collect::<Result<Vec<_>, _>>()?;
    let nstar = field("nstar", &file.nstar)?;
    let domain = Domain::new(file.domain.clone()).map_err(|e| schema("domain", e.to_string()))?;
    let mut problem =
        CauchyProblem::new(dims, xi, d_extra, nstar, domain).map_err(|e| schema("$", e.to_string()))?;
    if let Some(alt) = &file.nstar_alt {
        let alt = field("nstar_alt", alt)?;
        problem = problem.with_nstar_alt(alt).map_err(|e| schema("nstar_alt", e.to_string()))?;
    }
    if let Some(g) = &file.grid {
        if g.per_axis == Some(0) || g.b_points == Some(0) {
            return Err(schema("grid", "sample counts must be positive"));
        }
        if g.b_max.is_some_and(|b| !(b.is_finite() && b >= 0.0)) || g.fd_step.is_some_and(|h| !(h.is_finite() && h > 0.0)) {
            return Err(schema("grid", "b_max must be finite and non-negative, fd_step positive"));
        }
    }
    Ok(problem)
}

/// The problem file with every expression in canonical form.
pub fn canonical_file(problem: &CauchyProblem, tolerances: Option<Tolerances>, grid: Option<GridOverrides>) -> ProblemFile {
    let text = |xs: &[ExprAst]| xs.iter().map(|e| e.to_string()).collect::<Vec<_>>();
    ProblemFile {
        format_version: FORMAT_VERSION,
        dims: problem.dims(),
        domain: problem.domain().intervals().to_vec(),
        xi: text(problem.xi()),
        d_extra: problem.d_extra().iter().map(|d| text(d)).collect(),
        nstar: text(problem.nstar()),
        nstar_alt: problem.nstar_alt().map(text),
        tolerances,
        grid,
    }
}

/// Pretty-printed canonical problem file; loading it gives back an equal problem.
pub fn canonical_json(problem: &CauchyProblem, tolerances: Option<Tolerances>, grid: Option<GridOverrides>) -> String {
    let mut s = serde_json::to_string_pretty(&canonical_file(problem, tolerances, grid)).expect("problem serializes");
    s.push('\n');
    s
}

pub fn file_digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

/// Digest of the canonical text, for problems built in code.
pub fn problem_digest(problem: &CauchyProblem) -> String {
    file_digest(canonical_json(problem, None, None).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    const CYL: &str = r#"{
        "format_version": 1,
        "dims": {"s": 1, "m": 2, "c": 1},
        "domain": [[-1.2, 1.2]],
        "xi": ["cos(a1)", "sin(a1)", "0"],
        "d_extra": [["0", "0", "1"]],
        "nstar": ["cos(a1)", "sin(a1)", "0"]
    }"#;

    #[test]
    fn loads_cylinder() {
        let l = parse_problem(CYL).unwrap();
        assert_eq!(l.problem.dims(), Dims::new(1, 2, 1).unwrap());
        assert!(l.digest.starts_with("sha256:"));
    }

    #[test]
    fn canonical_round_trip() {
        let l = parse_problem(CYL).unwrap();
        let again = parse_problem(&canonical_json(&l.problem, None, None)).unwrap();
        assert_eq!(again.problem, l.problem);
    }

    #[test]
    fn missing_interval_names_domain() {
        let text = CYL.replace(r#""s": 1, "m": 2"#, r#""s": 2, "m": 3"#);
        let err = parse_problem(&text).unwrap_err();
        assert!(err.to_string().starts_with("domain"), "{err}");
    }

    #[test]
    fn out_of_range_parameter_names_field() {
        let text = CYL.replace(r#""sin(a1)", "0"],
        "d_extra""#, r#""sin(a2)", "0"],
        "d_extra""#);
        match parse_problem(&text).unwrap_err() {
            IoError::Expr { field, source: ParseError::ParameterOutOfRange { offset, .. } } => {
                assert_eq!(field, "xi[1]");
                assert_eq!(offset, 5);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn json_errors_carry_a_path() {
        let text = CYL.replace(r#""s": 1"#, r#""s": "one""#);
        match parse_problem(&text).unwrap_err() {
            IoError::Json { path, .. } => assert_eq!(path, "dims.s"),
            e => panic!("unexpected {e}"),
        }
    }
}
