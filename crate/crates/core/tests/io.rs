use std::path::PathBuf;

use rankcauchy::extension::{solve, CertifyConfig};
use rankcauchy::io::{load, obj_mesh, rulings_csv, samples_csv, IoError, LoadedProblem, ObjError};

fn fixture(name: &str) -> LoadedProblem {
    load(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"))).unwrap()
}

fn small() -> CertifyConfig {
    CertifyConfig { grid: 4, b_points: 3, ..CertifyConfig::default() }
}

#[test]
fn rulings_csv_columns() {
    let l = fixture("cylinder");
    let sol = solve(&l.problem, &small()).unwrap();
    let csv = rulings_csv(&l.problem, &sol);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "index,a1,E1_1,E1_2,E1_3,E2_1,E2_2,E2_3,phi1_1,phi1_2,X1_1,X1_2,X1_3");
    assert_eq!(lines.len(), 5);
    for (k, line) in lines[1..].iter().enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[0], k.to_string());
        assert_eq!(cols.len(), 13);
    }
}

#[test]
fn samples_csv_rows_in_grid_order() {
    let l = fixture("sphere_cylinder");
    let sol = solve(&l.problem, &small()).unwrap();
    let csv = samples_csv(&l.problem, &sol);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "a_index,b_index,a1,a2,b1,x1,x2,x3,x4");
    assert_eq!(lines.len(), 1 + 16 * 3);
    assert!(lines[1].starts_with("0,0,") && lines[2].starts_with("0,1,") && lines[4].starts_with("1,0,"));
}

#[test]
fn cylinder_mesh_lies_on_the_cylinder() {
    let l = fixture("cylinder");
    let sol = solve(&l.problem, &small()).unwrap();
    let obj = obj_mesh(&l.problem, &sol).unwrap();
    let vs: Vec<Vec<f64>> = obj
        .lines()
        .filter_map(|l| l.strip_prefix("v "))
        .map(|l| l.split(' ').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(vs.len(), 12);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 3 * 2);
    for v in vs {
        assert!((v[0] * v[0] + v[1] * v[1] - 1.0).abs() < 2e-9);
    }
    assert!(obj.lines().all(|l| l.starts_with("v ") || l.starts_with("f ")));
}

#[test]
fn obj_needs_a_surface_in_space() {
    let l = fixture("hypercylinder");
    let sol = solve(&l.problem, &small()).unwrap();
    assert_eq!(obj_mesh(&l.problem, &sol), Err(ObjError::UnsupportedDims { m: 3, c: 1 }));
}

#[test]
fn file_overrides_feed_the_config() {
    let text = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/cylinder.json"))
        .unwrap()
        .replacen('{', r#"{"grid": {"per_axis": 9, "b_max": 0.5}, "tolerances": {"nullity": 1e-5},"#, 1);
    let l = rankcauchy::io::parse_problem(&text).unwrap();
    let c = l.config();
    assert_eq!((c.grid, c.b_max, c.tolerances.nullity), (9, Some(0.5), 1e-5));
    assert_eq!(c.tolerances.rank, 1e-9);
    assert_eq!(c.digest.as_deref(), Some(l.digest.as_str()));
}

#[test]
fn unknown_fields_are_rejected_with_a_path() {
    let text = r#"{"format_version": 1, "dims": {"s": 1, "m": 2, "c": 1, "k": 3}}"#;
    match rankcauchy::io::parse_problem(text) {
        Err(IoError::Json { path, .. }) => assert_eq!(path, "dims.k"),
        r => panic!("{r:?}"),
    }
}
