use std::path::PathBuf;
use std::process::{Command, Output};

use zgraded::berezinian::gber;
use zgraded::expr::parse_element;
use zgraded::problem::Problem;

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zgraded"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

fn path(name: &str) -> String {
    problem(name).display().to_string()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn info_quaternion() {
    let out = ok(&["info", &path("quaternion.json")]);
    assert!(out.contains("dimension 4"), "{out}");
    assert!(out.contains("1 (0,0,0), i (0,1,1), j (1,0,1), i*j (1,1,0)"), "{out}");
    assert!(out.contains("r' = 2  q = 4"), "{out}");
}

#[test]
fn info_grassmann_and_bad_degree() {
    let dir = tempfile::tempdir().unwrap();
    let g2 = write_temp(
        &dir,
        "g2.json",
        r#"{"n": 1, "algebra": "grassmann(2)", "ranks": [1, 1]}"#,
    );
    assert!(ok(&["info", &g2]).contains("dimension 4"));

    let bad = write_temp(
        &dir,
        "bad.json",
        r#"{"n": 1, "algebra": "grassmann(2)", "ranks": [1, 1],
            "matrices": {"T": {"degree": [0, 0], "entries": [["1", "0"], ["0", "1"]]}}}"#,
    );
    let o = run(&["info", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("matrices.T.degree"));

    let missing = run(&["info", &dir.path().join("nope.json").display().to_string()]);
    assert_eq!(missing.status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn ber_examples() {
    assert_eq!(ok(&["ber", &path("unitriangular.json"), "T"]), "1\n");
    assert_eq!(
        ok(&["ber", &path("unitriangular.json"), "T", "--via-cohomology"]),
        "1 (both routes agree)\n"
    );
    let diag = ok(&["ber", &path("super.json"), "D"]);
    assert_eq!(diag.lines().next(), Some("2/3"));
    assert!(diag.contains("super closed form: 2/3 (agrees)"));
    let study = ok(&["ber", &path("quaternion.json"), "T"]);
    assert_eq!(study, "13\nStudy determinant: 13.0000000000\n");
    // only the reverse elimination order works here
    let u = ok(&["ber", &path("quaternion.json"), "U", "--via-cohomology"]);
    assert!(u.starts_with("1 (both routes agree)"));
}

#[test]
fn trace_and_transpose() {
    assert_eq!(ok(&["trace", &path("super.json"), "I"]), "1\n");
    let t = ok(&["transpose", &path("super.json"), "D"]);
    assert_eq!(t.lines().count(), 2);
}

#[test]
fn math_errors_exit_2() {
    let o = run(&["ber", &path("super.json"), "X"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["trace", &path("super.json"), "nope"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["--pi", "0", "cohomology", &path("super.json")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_values_round_trip() {
    let p = Problem::load(&problem("super.json")).unwrap();
    for name in ["D", "T"] {
        let out = ok(&["--json", "ber", &path("super.json"), name]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let parsed = parse_element(&p.algebra, v["value"].as_str().unwrap()).unwrap();
        assert_eq!(parsed, gber(p.matrix(name).unwrap()).unwrap());
    }
    let out = ok(&["--json", "trace", &path("quaternion.json"), "S"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let q = Problem::load(&problem("quaternion.json")).unwrap();
    let parsed = parse_element(&q.algebra, v["trace"].as_str().unwrap()).unwrap();
    assert_eq!(parsed, q.matrix("S").unwrap().graded_trace().unwrap());
}

#[test]
fn transpose_json_is_a_matrix_object() {
    let out = ok(&["--json", "transpose", &path("super.json"), "X"]);
    let m: zgraded::problem::MatrixJson = serde_json::from_str(&out).unwrap();
    let p = Problem::load(&problem("super.json")).unwrap();
    let want = p.matrix("X").unwrap().graded_transpose();
    let got: Vec<Vec<String>> = want
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|e| e.to_string()).collect())
        .collect();
    assert_eq!(m.entries, got);
}

#[test]
fn cohomology_report() {
    let out = ok(&["cohomology", &path("super.json")]);
    assert!(out.contains("    2           8            1  -"), "{out}");
    let json = ok(&["--json", "cohomology", &path("super.json"), "--weight-bound", "2"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["weight_bound"], 2);
}

#[test]
fn verify_is_deterministic_and_reports_negative_control() {
    let a = ok(&["verify", "trace-action", "--seed", "5"]);
    let b = ok(&["verify", "trace-action", "--seed", "5"]);
    assert_eq!(a, b);
    assert!(a.contains("PASS  trace-action/n=2 pi=(0,1) S of degree (1,1) rejected"));
    assert!(
        a.ends_with("all 7 checks passed\n") || a.contains("checks passed"),
        "{a}"
    );
}

#[test]
fn verify_on_a_problem_file() {
    let out = ok(&["verify", "koszul", &path("unitriangular.json"), "--seed", "3"]);
    assert!(out.contains("group action class = ber"));
    let o = run(&["verify", "everything"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn cohomology_route_covers_matrices_without_decomposition() {
    let o = run(&["ber", &path("unitriangular.json"), "N"]);
    assert_eq!(o.status.code(), Some(2));
    let out = ok(&["ber", &path("unitriangular.json"), "N", "--via-cohomology"]);
    assert!(out.contains("(cohomology route only; no block decomposition)"), "{out}");
}
