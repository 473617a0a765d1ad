use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_circle-interp"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_file(p: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn nodes_for_lebesgue_measure_are_roots_of_minus_one() {
    let o = run(&["nodes", "--measure", "lebesgue", "--tau", "1", "--n", "8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("j,theta,re,im"));
    for (k, line) in lines.enumerate() {
        let theta: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((theta - PI * (2 * k + 1) as f64 / 8.0).abs() < 1e-12);
    }
}

#[test]
fn check_reports_unit_b_hat_with_metadata() {
    let o = run(&["check", "--measure", "lebesgue", "--n", "64"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["report"]["b_hat"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["metadata"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["metadata"]["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn sweep_writes_csv_and_json_mirror() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = bin()
        .args(["sweep", "--family", "roots-of-unity", "--corpus", "holder:0.6", "--r", "0.5", "--ns", "32:256", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,p,q,s,sup_error,lebesgue_max,B_hat,L_hat"));
    let errs: Vec<f64> = lines.map(|l| l.split(',').nth(4).unwrap().parse().unwrap()).collect();
    assert_eq!(errs.len(), 4);
    assert!(errs[3] < errs[0]);
    let mirror = json_file(&dir.path().join("sweep.json"));
    assert_eq!(mirror["corpus"], "holder:0.6");
    assert_eq!(mirror["ns"].as_array().unwrap().len(), 4);
    assert!(mirror["metadata"]["config_hash"].is_string());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"family": "roots-of-unity", "n": 16, "corpus": "smooth-exp"}"#).unwrap();
    let from_file = run(&["interp", "--config", cfg.to_str().unwrap()]);
    assert!(from_file.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&from_file)).unwrap();
    assert_eq!(v["n"], 16);
    assert_eq!(v["corpus"], "smooth-exp");

    let overridden = run(&["interp", "--config", cfg.to_str().unwrap(), "--n", "32"]);
    let w: serde_json::Value = serde_json::from_str(&stdout(&overridden)).unwrap();
    assert_eq!(w["n"], 32);
    assert_eq!(w["corpus"], "smooth-exp");
    assert_ne!(v["metadata"]["config_hash"], w["metadata"]["config_hash"]);

    std::fs::write(&cfg, r#"{"bogus": 1}"#).unwrap();
    assert_eq!(run(&["interp", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["nodes", "--n", "0"]).status.code(), Some(1));
    assert_eq!(run(&["nodes", "--n", "4", "--tau", "2"]).status.code(), Some(1));
    assert_eq!(run(&["interp", "--n", "8", "--corpus", "sawtooth"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["check", "--n", "4", "--measure", "/no/such/file.json"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    // not a node file
    std::fs::write(&m, r#"{"kind": "lebesgue"}"#).unwrap();
    assert_eq!(run(&["check", "--nodes", m.to_str().unwrap()]).status.code(), Some(1));
    // a zero of h inside the disk is rejected input
    std::fs::write(&m, r#"{"kind": "bernstein-szego", "h_coeffs": [[1, 0], [-2, 0]]}"#).unwrap();
    assert_eq!(run(&["check", "--n", "4", "--measure", m.to_str().unwrap()]).status.code(), Some(1));
    // a zero just outside the circle makes the weight too peaked for the
    // quadrature: a numerical failure
    std::fs::write(&m, r#"{"kind": "bernstein-szego", "h_coeffs": [[1, 0], [-0.9999999, 0]]}"#).unwrap();
    let o = run(&["check", "--n", "4", "--measure", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn interval_and_trig_reports() {
    let o = run(&["interval", "--n", "12", "--variant", "mu2", "--weight", "chebyshev2", "--corpus", "smooth-exp"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 14);
    assert!(v["sup_error"].as_f64().unwrap() < 1e-8);

    let o = run(&["trig", "--n", "16", "--corpus", "holder:0.6"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["node_residual"].as_f64().unwrap() < 1e-11);
    assert_eq!(v["degree"], 16);
}

#[test]
fn node_file_and_dense_output() {
    let dir = tempfile::tempdir().unwrap();
    let nodes = dir.path().join("nodes.txt");
    let angles: String = (0..10).map(|k| format!("{}\n", 0.6 * k as f64 + 0.01 * (k * k) as f64)).collect();
    std::fs::write(&nodes, angles).unwrap();
    let out = dir.path().join("run.json");
    let o = bin()
        .args(["interp", "--corpus", "smooth-exp", "--dense", "32", "--nodes"])
        .arg(&nodes)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json_file(&out)["n"], 10);
    let dense = std::fs::read_to_string(dir.path().join("run.dense.csv")).unwrap();
    assert_eq!(dense.lines().next(), Some("theta,f,interpolant,error"));
    assert_eq!(dense.lines().count(), 33);
}

#[test]
fn interval_nodes_csv() {
    let o = run(&["nodes", "--weight", "chebyshev1", "--variant", "mu3", "--n", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "j,x,theta,endpoint");
    assert_eq!(rows.len(), 4);
    assert!(rows[3].ends_with(",1"));
    let x: f64 = rows[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((x - (2.0 * PI / 5.0).cos()).abs() < 1e-12);
}
