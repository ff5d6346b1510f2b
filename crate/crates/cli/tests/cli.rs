use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn areaext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_areaext"))
        .args(args)
        .env_remove("AREAEXT_FEAS_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn bounds(report: &Value) -> (f64, f64) {
    let b = &report["interval"]["bounds"];
    (b[0].as_f64().unwrap(), b[1].as_f64().unwrap())
}

#[test]
fn zoo_output_round_trips_through_ft_check() {
    let dir = tempfile::tempdir().unwrap();
    let fs = dir.path().join("fs.json");
    let o = areaext(&["zoo", "fubini-study", "-o", fs.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = areaext(&["--format", "json", "ft-check", fs.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let (a, b) = bounds(&report);
    assert!(a.abs() < 1e-6 && (b - 2.0).abs() < 1e-6);
    assert_eq!(report["feasible"], Value::Bool(true));
}

#[test]
fn reversed_orientation_interval() {
    let dir = tempfile::tempdir().unwrap();
    let o = areaext(&["zoo", "fubini-study-reversed"]);
    let path = write(dir.path(), "rev.json", &stdout(&o));
    let o = areaext(&["--format", "json", "ft-check", &path]);
    let (a, b) = bounds(&serde_json::from_str(&stdout(&o)).unwrap());
    assert!((a + 2.0).abs() < 1e-6 && b.abs() < 1e-6);
}

#[test]
fn indefinite_operator_yields_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "indefinite.json",
        r#"{"basis": "K", "matrix": [[1,0,0,0,0,0],[0,-1,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0]]}"#,
    );
    let o = areaext(&["--format", "json", "ft-check", &path]);
    assert_eq!(o.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["feasible"], Value::Bool(false));
    assert!(report["sec"].as_f64().unwrap() < 0.0);
    assert!(report["plane"]["x"].is_array());
}

#[test]
fn malformed_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = write(dir.path(), "m.json", r#"{"basis": "K"}"#);
    let o = areaext(&["ft-check", &missing]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("matrix"));
    let ragged = write(dir.path(), "r.json", r#"{"basis": "K", "matrix": [[1,2,3]]}"#);
    assert_eq!(areaext(&["ft-check", &ragged]).status.code(), Some(2));
    assert_eq!(areaext(&["ft-check", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(areaext(&["index", "--chiM", "3", "--sigmaM", "1", "--sigmaN", "1", "--deg", "0"]).status.code(), Some(2));
    assert_eq!(areaext(&["bogus"]).status.code(), Some(2));
}

#[test]
fn closed_index() {
    let o = areaext(&["index", "--closed", "--chiM", "3", "--sigmaM", "1", "--sigmaN", "1", "--deg", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().next().unwrap() == "index = 2");
}

#[test]
fn boundary_index_with_negative_arguments() {
    let o = areaext(&[
        "index", "--boundary", "--chiM", "1", "--sigmaM", "0", "--sigmaN", "-1", "--deg", "1", "--b0dM", "1", "--b2dM", "0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("index = 5/4"));
    assert!(text.contains("warning"));
    assert!(text.contains("C_loc: yes"));
}

#[test]
fn json_reports_are_deterministic() {
    let run = || stdout(&areaext(&["--format", "json", "verify-lemmas", "--samples", "12", "--seed", "9"]));
    let a = run();
    assert_eq!(a, run());
    let report: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(report["passed"], Value::Bool(true));
}

#[test]
fn extremal_and_boundary_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let o = areaext(&["zoo", "fubini-study-reversed"]);
    let r_m = stdout(&o);
    let identity = "[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]";
    let good = write(dir.path(), "p.json", &format!(r#"{{"R_M": {r_m}, "tau": -1, "scal_N": 24, "l": {identity}}}"#));
    let o = areaext(&["--format", "json", "extremal-cert", &good]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report["weitzenboeck_gap"].as_f64().unwrap() >= -1e-9);

    let half = "[[0.5,0,0,0],[0,0.5,0,0],[0,0,0.5,0],[0,0,0,0.5]]";
    let homothety = write(dir.path(), "h.json", &format!(r#"{{"R_M": {r_m}, "tau": -1, "scal_N": 6, "l": {half}}}"#));
    let o = areaext(&["--format", "json", "extremal-cert", &homothety]);
    assert_eq!(o.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["scal_inequality"], Value::Bool(false));

    let bd = write(dir.path(), "b.json", r#"{"II": [[1,0,0],[0,1,0],[0,0,1]], "H_N": 3}"#);
    let o = areaext(&["--format", "json", "boundary-cert", &bd]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["trace_identity"], Value::Bool(true));
    let indefinite = write(dir.path(), "i.json", r#"{"II": [[1,0,0],[0,-1,0],[0,0,0]], "H_N": 3}"#);
    assert_eq!(areaext(&["boundary-cert", &indefinite]).status.code(), Some(1));
}

#[test]
fn cheeger_sweep_csv() {
    let o = areaext(&["--format", "csv", "cheeger", "--r0", "10", "--rmax", "12", "--samples", "25"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("r,tau,scal"));
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    assert_eq!(rows.len(), 25);
    for row in &rows {
        let tau: f64 = row[1].parse().unwrap();
        assert!(tau <= 1e-12);
        if row[10] == "true" {
            assert_eq!(tau, 0.0);
        }
    }
    let o = areaext(&["cheeger", "--r0", "2", "--rmax", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn feasibility_tolerance_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    // Slightly below sec >= 0: accepted only with a loose tolerance.
    let path = write(
        dir.path(),
        "near.json",
        r#"{"basis": "K", "matrix": [[1,0,0,0,0,0],[0,-1e-7,0,0,0,0],[0,0,1,0,0,0],[0,0,0,1,0,0],[0,0,0,0,1,0],[0,0,0,0,0,1]]}"#,
    );
    let strict = areaext(&["--format", "json", "ft-check", &path]);
    assert_eq!(strict.status.code(), Some(1));
    let loose = Command::new(env!("CARGO_BIN_EXE_areaext"))
        .args(["--format", "json", "ft-check", &path])
        .env("AREAEXT_FEAS_TOL", "1e-3")
        .output()
        .unwrap();
    let report: Value = serde_json::from_str(&String::from_utf8(loose.stdout).unwrap()).unwrap();
    assert!(report["interval"]["bounds"].is_array());
}
