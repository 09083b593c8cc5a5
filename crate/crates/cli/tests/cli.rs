use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frailty-alt")).args(args).output().expect("binary runs")
}

fn json_file(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn param(result: &Value, name: &str) -> f64 {
    result["params"]
        .as_array()
        .unwrap()
        .iter()
        .find(|p| p["name"] == name)
        .unwrap()["estimate"]
        .as_f64()
        .unwrap()
}

#[test]
fn fit_lab_writes_artifact_with_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fit.json");
    let status = run(&["fit-lab", "--out", out.to_str().unwrap()]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let v = json_file(&out);
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["command"][0], "frailty-alt");
    assert_eq!(v["command"][1], "fit-lab");
    assert!(v["tool_version"].is_string());
    assert!(v["seed"].is_null());
    let alpha = param(&v["result"], "alpha");
    let beta = param(&v["result"], "beta");
    assert!((alpha - 529.41).abs() < 0.01, "{alpha}");
    assert!((beta - 1.5503).abs() < 1e-4, "{beta}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pivotal.json");
    let args = ["test-pivotal", "--B", "1000", "--seed", "7", "--out", out.to_str().unwrap()];
    assert!(run(&args).status.success());
    let first = std::fs::read(&out).unwrap();
    assert!(run(&args).status.success());
    assert_eq!(first, std::fs::read(&out).unwrap());
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["result"]["B"], 1000);
    let p = v["result"]["p_value"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&p));
}

#[test]
fn plan_alt_example() {
    let out = run(&[
        "plan-alt", "--v0", "3.0", "--v1", "3.4", "--beta", "2.28", "--mu", "0.452", "--k", "0.0341", "--censor", "50",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let plan = &v["result"]["optimum"]["plan"];
    assert!((plan["xi_l"].as_f64().unwrap() - 0.339).abs() < 0.005);
    assert!((plan["pi"].as_f64().unwrap() - 0.651).abs() < 0.005);
}

#[test]
fn csv_output_has_metadata_header() {
    let out = run(&["km", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# format_version: 1"));
    assert!(text.contains("# command: frailty-alt km --format csv"));
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["fit-lab", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["test-pivotal", "--B", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(run(&["--help"]).status.success());
}

#[test]
fn bad_data_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "time,status\n10,1\n-3,0\n").unwrap();
    let out = run(&["fit-lab", "--data", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let missing = run(&["fit-lab", "--data", dir.path().join("none.csv").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn simulation_table_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("table.csv");
    let table = |jobs: &str| {
        let args = [
            "simulate-table1", "--replications", "3", "--B", "200", "--scenarios", "II", "--betas", "2.0",
            "--sizes", "2000", "--levels", "0.1", "--format", "csv", "--jobs", jobs, "--out",
            out.to_str().unwrap(),
        ];
        let o = run(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read_to_string(&out).unwrap()
    };
    let one = table("1");
    let two = table("2");
    let strip = |s: &str| s.lines().filter(|l| !l.starts_with("# command")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&one), strip(&two));
    assert!(one.contains("scenario,beta,N,level,test,estimate,mc_se,replications,failed"));
}

#[test]
fn hazard_shape_reports_label() {
    let out = run(&["hazard-shape", "--alpha", "1", "--beta", "2", "--mu", "0.1", "--k", "1", "--gamma", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("n_shape"), "{text}");
}
