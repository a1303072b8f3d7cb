use std::process::{Command, Output};

fn siegel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_siegel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn classical_genus_two_constant_term() {
    let out = siegel(&["classical", "--genus", "2", "--weight", "4", "--trace-bound", "3"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["entries"]["2:0,0,0"], "-1/60480");
    assert_eq!(v["entries"]["2:2,0,0"], "-1/252");
    assert_eq!(v["entries"]["2:2,1,2"], "-2/9");
}

#[test]
fn genus_one_suite_passes() {
    for k in ["4", "6"] {
        let out = siegel(&["verify", "genus1", "--weight", k, "--prime", "5", "--trace-bound", "50"]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(json(&out)["pass"], true);
    }
}

#[test]
fn operator_suite_passes() {
    let out = siegel(&["verify", "--suite", "operator", "--genus", "2", "--weight", "5", "--char", "7:3^1", "--prime", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn invalid_spec_exits_two() {
    // weight must exceed genus + 1
    assert_eq!(siegel(&["classical", "--genus", "2", "--weight", "3"]).status.code(), Some(2));
    // parity mismatch with an odd character
    assert_eq!(siegel(&["classical", "--weight", "4", "--char", "7:3^1"]).status.code(), Some(2));
    // p divides the level
    assert_eq!(siegel(&["stabilize", "--weight", "3", "--char", "7:3^1", "--prime", "7"]).status.code(), Some(2));
    assert_eq!(siegel(&["verify"]).status.code(), Some(2));
    assert_eq!(siegel(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["stabilize", "--genus", "2", "--weight", "6", "--prime", "3", "--trace-bound", "3", "--jobs", "3"];
    let a = siegel(&args);
    let b = siegel(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let args = ["verify", "siegel-series", "--seed", "7"];
    assert_eq!(siegel(&args).stdout, siegel(&args).stdout);
}

#[test]
fn siegel_series_reports_polynomial() {
    let out = siegel(&["siegel-series", "--matrix", "3:2,0,0,2,0,2", "--prime", "2"]);
    let v = json(&out);
    assert_eq!(v["F"]["coeffs"], serde_json::json!(["1", "0", "-16"]));
    assert_eq!(v["functional_equation"], true);
    assert_eq!(v["routes_agree"], true);
}

#[test]
fn lambda_writes_output_file() {
    let dir = std::env::temp_dir().join(format!("siegel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("lambda.json");
    let out = siegel(&[
        "lambda", "--genus", "1", "--weight", "6", "--prime", "5", "--trace-bound", "2",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["params"]["a"], 2);
    assert_eq!(v["entries"]["1:0"]["coefficient"]["pole_order"], 0);
    assert_eq!(v["entries"]["1:0"]["coefficient"]["coeffs"].as_array().unwrap().len(), 6);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn kummer_and_specialization_suites_pass() {
    for suite in ["kummer", "lambda-specialize"] {
        let out = siegel(&["verify", suite, "--genus", "1", "--weight", "6", "--prime", "5"]);
        assert_eq!(out.status.code(), Some(0), "{suite}");
    }
}
