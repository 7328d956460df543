use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let out: Output = Command::new(env!("CARGO_BIN_EXE_specrad")).args(args).output().expect("binary runs");
    let code = out.status.code().expect("exit code");
    if out.stdout.is_empty() {
        return (code, Value::Null);
    }
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (code, v)
}

#[test]
fn spectral_comparison() {
    let (code, v) = run(&["spectral", "Bg", "Bw", "--compare", "sqrt(2)", "--charpoly"]);
    assert_eq!(code, 0);
    let r = v["results"].as_array().unwrap();
    assert_eq!(r[0]["compare"], "EQUAL");
    assert_eq!(r[1]["compare"], "GREATER");
    assert!((r[1]["lambda1"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!(r[1]["charpoly"].is_array() || r[1]["charpoly"].is_string());
}

#[test]
fn spectral_rejects_bad_graph6() {
    let (code, v) = run(&["spectral", "???"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"], "ERROR");
}

#[test]
fn forbidden_family_and_refusal() {
    let (code, v) = run(&["forbidden", "--lambda", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["members"], serde_json::json!(["BW"]));
    let (code, v) = run(&["forbidden", "--lambda", "3/2", "--check-up-to", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["members"].as_array().unwrap().len(), 3);
    assert_eq!(v["oracle"]["passed"], true);
    let (code, v) = run(&["forbidden", "--lambda", "sqrt(2+sqrt(5))"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"], "UNSUPPORTED_LAMBDA");
    let (code, _) = run(&["forbidden", "--lambda", "alpha(2)"]);
    assert_eq!(code, 2);
}

#[test]
fn spectral_order() {
    let (_, v) = run(&["order", "--lambda", "2"]);
    assert_eq!(v["k"], 3);
    let (_, v) = run(&["order", "--lambda", "x^2-3@[1,2]"]);
    assert_eq!(v["k"], 4);
    let (_, v) = run(&["order", "--lambda", "lambda*"]);
    assert!(v["infinite_analytic"].is_string());
}

#[test]
fn construct_project_audit() {
    let dir = tempfile::tempdir().unwrap();
    let code_path = dir.path().join("code.json");
    let proj_path = dir.path().join("proj.json");
    let c = code_path.to_str().unwrap();
    let p = proj_path.to_str().unwrap();
    let (code, _) = run(&["--out", c, "lines", "construct", "--alpha", "1/5", "--n", "15"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&code_path).unwrap()).unwrap();
    assert_eq!(v["lines"], 21);
    assert_eq!(v["audit"]["valid"], true);
    let (code, _) = run(&["--out", p, "lines", "project", "--alpha", "1/5", "--t", "6", "--in", c]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&proj_path).unwrap()).unwrap();
    assert_eq!(v["L"], serde_json::json!(["-4/11", "1/11"]));
    assert_eq!(v["output_size"], 3);
    assert_eq!(v["rank_check"]["passed"], true);
    let (code, v) = run(&["lines", "audit", "--alpha", "1/5", "--in", p]);
    assert_eq!(code, 0);
    assert_eq!(v["audit"]["valid"], true);
    let (code, _) = run(&["lines", "project", "--alpha", "1/5", "--t", "5", "--in", c]);
    assert_eq!(code, 2);
}

#[test]
fn irrational_construction() {
    let (code, v) = run(&["lines", "construct", "--alpha", "1/(1+2*sqrt(2))", "--n", "15"]);
    assert_eq!(code, 0);
    assert_eq!(v["lines"], 21);
    assert_eq!(v["code"]["exact"], false);
    let (code, v) = run(&["lines", "construct", "--alpha", "1/(1+2*sqrt(2))", "--n", "15", "--precision", "f64"]);
    assert_eq!(code, 0);
    assert_eq!(v["audit"]["valid"], true);
}

#[test]
fn bounds_sandwich() {
    let (code, v) = run(&["lines", "bounds", "--alpha", "1/7", "--n", "1000"]);
    assert_eq!(code, 0);
    assert_eq!(v["sandwich_ok"], true);
    let rows = v["upper_bounds"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["coefficient"] == "49/36"));
    assert_eq!(v["lower_bound"]["count"].as_u64().or(v["lower_bound"].as_u64()), Some(1332));
}

#[test]
fn constants_and_selftest() {
    let (code, v) = run(&["constants", "--m", "2..5"]);
    assert_eq!(code, 0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert_eq!(v["alpha_increasing"], true);
    assert!((v["rows"][0]["beta"].as_f64().unwrap() - 1.3247179572).abs() < 1e-10);
    let (code, v) = run(&["selftest", "--seed", "3", "--cases", "40"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
}
