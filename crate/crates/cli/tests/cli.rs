use qlorentz_cli::run;
use serde_json::Value;
use std::process::Command;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qlorentz").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let (code, out, err) = call(&a);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn column(v: &Value, name: &str) -> Vec<String> {
    let k = v["columns"].as_array().unwrap().iter().position(|c| c == name).unwrap();
    v["rows"].as_array().unwrap().iter().map(|r| r[k].as_str().unwrap().to_string()).collect()
}

#[test]
fn jones_table_schema() {
    let v = json(&["jones", "--braid", "s1 s1 s1", "--interpolate", "--order", "2"]);
    assert_eq!(v["schema"], "qlorentz.jones-interpolated/1");
    assert_eq!(v["columns"], serde_json::json!(["n", "polynomial", "coefficients"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][1], "1");
    assert_eq!(rows[2][2].as_array().unwrap().len(), 3, "h^2 has degree 2 in z");
}

#[test]
fn exact_output_is_byte_identical() {
    let a = call(&["lorentz", "--knot", "figure-eight", "--order", "3", "--format", "csv"]);
    let b = call(&["lorentz", "--knot", "figure-eight", "--order", "3", "--format", "csv"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    assert!(a.1.starts_with("n,polynomial,coefficients\n0,1,1\n"), "{}", a.1);
}

#[test]
fn qlg_matches_lorentz_side() {
    let q = json(&["qlg", "--knot", "trefoil-left", "--p", "2", "--order", "3"]);
    let l = json(&["lorentz", "--knot", "trefoil-left", "--m", "0", "--p", "2", "--order", "3"]);
    let a = column(&q, "coefficient");
    let b = column(&l, "times_p2_over_qp2");
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        let x: f64 = x.parse().unwrap();
        let y: qlorentz::scalar::GaussianRational = y.parse().unwrap();
        assert!((x - y.to_f64_pair().0).abs() < 1e-12, "{x} vs {y}");
    }
}

#[test]
fn equivalence_report() {
    let v = json(&["lorentz", "--knot", "T+", "--p", "2", "--order", "2", "--check-equivalence", "--precision", "40"]);
    assert_eq!(v["summary"]["pass"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn weights_and_diagrams() {
    let v = json(&["weights", "--diagram", "ABAB", "--m", "1", "--route", "both"]);
    assert_eq!(v["rows"][0][1], 1);
    let v = json(&["weights", "--chords", "1", "--algebra", "sl2"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    let v = json(&["diagrams", "--chords", "4", "--dimensions"]);
    let dims: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r[2].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1, 1, 2, 3, 6]);
    let v = json(&["diagrams", "--chords", "3", "--relations"]);
    assert!(!v["rows"].as_array().unwrap().is_empty());
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "order = 2\nformat = \"csv\"\nknot = \"trefoil-right\"\n").unwrap();
    let p = path.to_str().unwrap();
    let (code, out, _) = call(&["jones", "--config", p]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 4, "header plus orders 0..2: {out}");
    let (code, out, _) = call(&["jones", "--config", p, "--order", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 5);
    std::fs::write(&path, "colour = 1\n").unwrap();
    assert_eq!(call(&["jones", "--config", p, "--knot", "unknot"]).0, 2);
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["jones", "--braid", "s1 x2"]).0, 2);
    assert_eq!(call(&["jones", "--knot", "unknot", "--precision", "20"]).0, 2);
    assert_eq!(call(&["qlg", "--knot", "T+", "--p", "2", "--order", "3", "--cutoff", "2"]).0, 2);
    assert_eq!(call(&["jones", "--braid", "s1 s1"]).0, 2, "two-component closure");
    let (code, _, err) = call(&["qlg", "--knot", "T+", "--p", "2", "--order", "3", "--max-states", "4"]);
    assert_eq!(code, 3, "{err}");
    assert_eq!(qlorentz_cli::exit_code(&qlorentz::Error::Consistency("x".into())), 4);
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn cache_roundtrip_through_env_and_flag() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["qlg", "--knot", "T-", "--p", "2", "--order", "2", "--precision", "40", "--cache-dir", d];
    let (c1, out1, err1) = call(&args);
    assert_eq!(c1, 0);
    assert!(err1.contains("saved"), "{err1}");
    assert!(dir.path().join("manifest.json").exists());
    let (c2, out2, err2) = call(&args);
    assert_eq!(c2, 0);
    assert!(err2.contains("loaded"), "{err2}");
    assert_eq!(out1, out2);
    // a cache built at another precision is reported and ignored
    let (c3, _, err3) = call(&["qlg", "--knot", "T-", "--p", "2", "--order", "2", "--precision", "50", "--cache-dir", d]);
    assert_eq!(c3, 0);
    assert!(err3.contains("ignoring"), "{err3}");

    let envdir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_qlorentz");
    let st = Command::new(bin)
        .args(["qlg", "--knot", "T-", "--p", "2", "--order", "2", "--precision", "40"])
        .env("QLORENTZ_CACHE_DIR", envdir.path())
        .output()
        .unwrap();
    assert!(st.status.success());
    assert!(envdir.path().join("cg.bin").exists());
}

#[test]
fn binary_reports_usage_errors() {
    let bin = env!("CARGO_BIN_EXE_qlorentz");
    let st = Command::new(bin).args(["qlg", "--p", "2"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&st.stderr).contains("--braid or --knot"));
}

#[test]
fn workers_flag() {
    let a = call(&["jones", "--knot", "figure-eight", "--order", "2", "--workers", "1"]);
    let b = call(&["jones", "--knot", "figure-eight", "--order", "2", "--workers", "2"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    assert_eq!(call(&["jones", "--knot", "unknot", "--workers", "0"]).0, 2);
}

#[test]
fn verify_selected_criteria() {
    let v = json(&["verify", "--order", "4", "--criteria", "1,2,3,7"]);
    assert_eq!(v["summary"]["failed"], 0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert_eq!(call(&["verify", "--criteria", "11"]).0, 2);
}

/// The whole suite with orders capped at 4.
#[test]
fn verify_full_suite() {
    let (code, out, err) = call(&["verify", "--order", "4"]);
    assert_eq!(code, 0, "{out}\n{err}");
    assert_eq!(out.matches("true").count(), 10, "{out}");
}
