use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"))
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rankcauchy")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn check_passes_on_cylinder() {
    let (code, out, _) = run(&["check", &fixture("cylinder")]);
    assert_eq!(code, 0);
    assert!(out.contains("nonsingularity: pass") && out.contains("solvability: pass"), "{out}");
}

#[test]
fn missing_file_is_an_io_error() {
    let (code, _, err) = run(&["check", "/nonexistent/problem.json"]);
    assert_eq!(code, 1);
    assert!(err.contains("cannot read"), "{err}");
}

#[test]
fn schema_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let text = std::fs::read_to_string(fixture("cylinder")).unwrap().replace(r#""s": 1, "m": 2"#, r#""s": 2, "m": 3"#);
    std::fs::write(&path, text).unwrap();
    let (code, _, err) = run(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("domain: expected 2 intervals"), "{err}");
}

#[test]
fn obj_export_rejects_higher_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = run(&["export-obj", &fixture("hypercylinder"), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("m = 2, c = 1"), "{err}");
    assert!(!dir.path().join("mesh.obj").exists());
}

#[test]
fn solve_writes_both_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _, err) = run(&["solve", &fixture("sphere_cone"), "--grid", "4", "--bpoints", "2", "--out", out, "--quiet"]);
    assert_eq!(code, 0, "{err}");
    let rulings = std::fs::read_to_string(dir.path().join("rulings.csv")).unwrap();
    let samples = std::fs::read_to_string(dir.path().join("samples.csv")).unwrap();
    assert_eq!(rulings.lines().count(), 1 + 16);
    assert_eq!(samples.lines().count(), 1 + 32);
}

#[test]
fn solve_refuses_singular_data() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = run(&["solve", &fixture("plane_singular"), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("nonsingularity"), "{err}");
    assert!(!dir.path().join("rulings.csv").exists());
}

#[test]
fn cone_rulings_meet_at_the_apex() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _, err) = run(&["export-obj", &fixture("cone"), "--grid", "9", "--bmax", "0.5", "--out", out, "--quiet"]);
    assert_eq!(code, 0, "{err}");
    let obj = std::fs::read_to_string(dir.path().join("mesh.obj")).unwrap();
    let vs: Vec<[f64; 3]> = obj
        .lines()
        .filter_map(|l| l.strip_prefix("v "))
        .map(|l| {
            let x: Vec<f64> = l.split(' ').map(|t| t.parse().unwrap()).collect();
            [x[0], x[1], x[2]]
        })
        .collect();
    // five samples per ruling; each ruling is the line through its first and last vertex
    let lines: Vec<([f64; 3], [f64; 3])> = vs.chunks(5).map(|c| (c[0], c[4])).collect();
    let sub = |a: [f64; 3], b: [f64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let cross = |a: [f64; 3], b: [f64; 3]| [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let mut min_dist = f64::INFINITY;
    for (i, &(p, q)) in lines.iter().enumerate() {
        for &(r, t) in &lines[i + 1..] {
            let n = cross(sub(q, p), sub(t, r));
            let d = dot(sub(r, p), n).abs() / dot(n, n).sqrt();
            min_dist = min_dist.min(d);
        }
    }
    assert!(min_dist < 1e-7, "{min_dist:e}");
    // and the apex is the origin: every line passes near it
    for &(p, q) in &lines {
        let d = cross(p, sub(q, p));
        assert!(dot(d, d).sqrt() / dot(sub(q, p), sub(q, p)).sqrt() < 1e-7);
    }
}

#[test]
fn quiet_verify_prints_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(&["verify", &fixture("cylinder"), "--quiet", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
}
