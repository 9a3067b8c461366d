//! End-to-end tests of the `opf` binary: JSON contracts, exit codes, and the
//! round-trip of the `system` output through `--system-json`.

use std::process::{Command, Output};

use serde_json::Value;

fn opf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

#[test]
fn families_lists_eight_rows() {
    let out = opf(&["families"]);
    assert!(out.status.success());
    let rows = json_stdout(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for row in rows {
        for field in ["id", "rho", "tau", "lambda_rule", "params", "interval"] {
            assert!(row.get(field).is_some(), "missing {field}");
        }
    }
    assert!(rows.iter().any(|r| r["id"] == "hermite" && r["lambda_rule"] == "2*n"));
    let gegenbauer = rows.iter().find(|r| r["id"] == "gegenbauer").unwrap();
    assert_eq!(gegenbauer["lambda_rule"], "n*(n+2*alpha)");
    assert_eq!(gegenbauer["params"], serde_json::json!(["alpha"]));
    let laguerre = rows.iter().find(|r| r["id"] == "laguerre").unwrap();
    assert_eq!(laguerre["interval"], serde_json::json!(["0", "inf"]));
}

#[test]
fn degenerate_equator_is_reported_not_fatal() {
    // linear system v' = v, x' = x: the whole equator is critical
    let inline = r#"{"P": "v", "Q": "x"}"#;
    let out = opf(&["critical-points", "--system-json", inline, "--include-infinity"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate equator"));
    let rows = json_stdout(&out);
    // the finite origin is still classified
    assert_eq!(rows.as_array().unwrap().len(), 1);
    assert_eq!(rows[0]["kind"], "node-unstable");
}

#[test]
fn portrait_plane_mode_with_window() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("plane.svg");
    let svg_s = svg.display().to_string();
    let out = opf(&[
        "portrait", "--family", "hermite", "--n", "2", "--mu", "1", "--plane",
        "--window", "-3", "3", "-3", "3", "--seeds", "grid", "--horizon", "1.0",
        "--svg", &svg_s,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let content = std::fs::read_to_string(&svg).unwrap();
    // plane mode: no disk boundary, trajectories present
    assert!(!content.contains("disk-boundary"));
    assert!(content.contains("class=\"trajectory\""));
}

#[test]
fn system_output_round_trips() {
    let out = opf(&["system", "--family", "chebyshev-t", "--n", "3", "--mu", "1/2"]);
    assert!(out.status.success());
    let sys = json_stdout(&out);
    assert_eq!(sys["degree"], 2);
    let text = serde_json::to_string(&sys).unwrap();
    // feed back unchanged
    let out2 = opf(&["system", "--system-json", &text]);
    assert!(out2.status.success());
    let sys2 = json_stdout(&out2);
    assert_eq!(sys["P"], sys2["P"]);
    assert_eq!(sys["Q"], sys2["Q"]);
    assert_eq!(sys["degree"], sys2["degree"]);
}

#[test]
fn verify_invariant_hermite() {
    let out = opf(&["verify-invariant", "--family", "hermite", "--n", "3", "--mu", "1"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["exact"], true);
    assert_eq!(v["cofactor"], "v+2x");
    assert_eq!(v["remainder"], Value::Null);
}

#[test]
fn verify_invariant_rejects_non_invariant() {
    let out = opf(&["verify-invariant", "--family", "hermite", "--n", "2", "--mu", "1", "--f", "v"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_stdout(&out);
    assert_eq!(v["exact"], false);
    assert_eq!(v["remainder"], "4");
}

#[test]
fn zero_mu_is_usage_error() {
    let out = opf(&["system", "--family", "hermite", "--n", "0", "--mu", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn conflicting_selectors_are_usage_error() {
    let out = opf(&[
        "system", "--family", "hermite", "--n", "1", "--mu", "1", "--jacobi-shape",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn darboux_jacobi_shape_exponents() {
    let out = opf(&[
        "darboux", "--jacobi-shape", "--a", "0", "--b", "0", "--lambda", "2", "--mu", "1", "--s", "1",
    ]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["feasible"], true);
    assert_eq!(v["lambdas"], serde_json::json!(["-1/2", "1/2"]));
    assert_eq!(v["invariant"], "sqrt(x-1)/sqrt(x+1)*exp(t)");
}

#[test]
fn darboux_infeasible_exits_one() {
    // Hermite: only the family curve, whose cofactor carries a v term
    let out = opf(&["darboux", "--family", "hermite", "--n", "2", "--mu", "1", "--s", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn critical_points_chebyshev() {
    let out = opf(&["critical-points", "--family", "chebyshev-t", "--n", "2", "--mu", "1"]);
    assert!(out.status.success());
    let rows = json_stdout(&out);
    let rows = rows.as_array().unwrap().clone();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["chart"] == "finite" && r["exact"] == true));
    let kinds: Vec<&str> = rows.iter().map(|r| r["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds.iter().filter(|k| **k == "saddle").count(), 2);
}

#[test]
fn critical_points_include_infinity() {
    let out = opf(&[
        "critical-points", "--laguerre-shape", "--lambda", "2", "--mu", "1", "--a", "1", "--b", "0",
        "--include-infinity",
    ]);
    assert!(out.status.success());
    let rows = json_stdout(&out);
    let rows = rows.as_array().unwrap().clone();
    let infinity: Vec<_> = rows.iter().filter(|r| r["chart"] != "finite").collect();
    assert!(!infinity.is_empty());
    assert!(infinity.iter().any(|r| r["evidence"]["type"] == "nilpotent"
        && r["evidence"]["m"] == 4
        && r["evidence"]["n"] == 1));
    assert!(infinity.iter().all(|r| r.get("direction").is_some()));
}

#[test]
fn portrait_writes_deterministic_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg1 = dir.path().join("a.svg");
    let svg2 = dir.path().join("b.svg");
    let csv = dir.path().join("a.csv");
    let manifest = dir.path().join("a.json");
    let run = |svg: &std::path::Path, csv_flag: bool| {
        let svg_s = svg.display().to_string();
        let csv_s = csv.display().to_string();
        let man_s = manifest.display().to_string();
        let mut args = vec![
            "portrait", "--jacobi-shape", "--lambda", "2", "--mu", "1", "--a", "1",
            "--horizon", "1.5", "-o", &svg_s,
        ];
        if csv_flag {
            args.extend_from_slice(&["--csv", &csv_s, "--json", &man_s]);
        }
        let out = opf(&args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    };
    run(&svg1, true);
    run(&svg2, false);
    let a = std::fs::read(&svg1).unwrap();
    let b = std::fs::read(&svg2).unwrap();
    assert_eq!(a, b, "portrait SVG not byte-identical across runs");
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("trajectory_id,t,v,x"));
    let man: Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert!(man["critical_points"].as_array().unwrap().len() >= 4);
}

#[test]
fn chebyshev_integral_reports() {
    let out = opf(&["chebyshev-integral", "--n", "2", "--mu", "1"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert_eq!(v["exact_residual_T"], true);
    assert!(v["bridge_roundtrip_err"].as_f64().unwrap() < 1e-12);
    assert_eq!(v["lambda"], "4");
}

#[test]
fn selftest_fault_injection_fails() {
    let out = opf(&["selftest", "--inject-fault", "cofactor", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_stdout(&out);
    assert_eq!(v["passed"], false);
    let criteria = v["criteria"].as_array().unwrap();
    let a1 = criteria.iter().find(|c| c["id"] == "A1").unwrap();
    assert_eq!(a1["passed"], false);
    // the uncorrupted criteria still pass
    assert!(criteria.iter().filter(|c| c["id"] != "A1").all(|c| c["passed"] == true));
}

#[test]
fn series_order_env_is_accepted() {
    let out = Command::new(env!("CARGO_BIN_EXE_opf"))
        .env("OPF_SERIES_ORDER", "16")
        .args(["critical-points", "--jacobi-shape", "--lambda", "2", "--mu", "1", "--a", "0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let rows: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2);
}
