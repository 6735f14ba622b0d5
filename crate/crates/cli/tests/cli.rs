use std::process::{Command, Output};

use serde_json::Value;

fn qsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsym")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn verify_space_all_passes() {
    let out = qsym(&["verify", "--model", "space", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["failed"], 0);
}

#[test]
fn verify_classical_relations_fifteen() {
    let out = qsym(&["verify", "--model", "classical", "--suite", "relations"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 15);
    assert!(checks.iter().all(|c| c["status"] == "pass"));
}

#[test]
fn verify_symmetry_at_half_has_zero_remainders() {
    let out = qsym(&["verify", "--model", "space", "--suite", "symmetry", "--a", "-1/2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let rems: Vec<_> = report["checks"].as_array().unwrap().iter().filter_map(|c| c.get("remainder")).collect();
    assert_eq!(rems.len(), 3);
    assert!(rems.iter().all(|r| *r == "0"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(qsym(&["verify", "--model", "nope"]).status.code(), Some(1));
    assert_eq!(qsym(&["verify", "--model", "space", "--suite", "nope"]).status.code(), Some(1));
    assert_eq!(qsym(&["verify", "--model", "classical", "--suite", "hopf"]).status.code(), Some(1));
    assert_eq!(qsym(&["solve", "--model", "space", "--z", "-1"]).status.code(), Some(1));
    assert_eq!(qsym(&["expand", "x +"]).status.code(), Some(1));
}

#[test]
fn solve_time_mode_ratio() {
    let out = qsym(&["solve", "--model", "time", "--init", "mode:1", "--steps", "2", "--z", "0.125", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let ratio = json(&out)["amplitude_ratio"][0].as_f64().unwrap();
    assert!((ratio - 1.125f64.powi(-2)).abs() < 1e-14);
}

#[test]
fn solve_space_constant_is_unchanged() {
    let out = qsym(&["solve", "--model", "space", "--init", "constant", "--dt", "1.0"]);
    assert_eq!(out.status.code(), Some(0));
    let levels = json(&out)["levels"].as_array().unwrap().clone();
    assert_eq!(levels.len(), 2);
    assert_eq!(levels[1]["max_abs"], 1.0);
    assert_eq!(levels[1]["residual"], 0.0);
}

#[test]
fn solve_space_mode_matches_multiplier() {
    let out = qsym(&["solve", "--model", "space", "--init", "mode:5", "--dt", "0.02", "--steps", "3"]);
    let v = json(&out);
    for i in 0..2 {
        let got = v["amplitude_ratio"][i].as_f64().unwrap();
        let want = v["expected_ratio"][i].as_f64().unwrap();
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
}

#[test]
fn solve_writes_files_and_reads_them_back() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = qsym(&["solve", "--model", "space", "--init", "gaussian", "--dt", "0.01", "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("manifest.json").exists());
    let csv = dir.path().join("level_0001.csv");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("index,x,re,im\n"));
    let meta: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("level_0001.json")).unwrap()).unwrap();
    assert_eq!(meta["model"], "space");
    assert!((meta["t"].as_f64().unwrap() - 0.01).abs() < 1e-15);
    let again = qsym(&["solve", "--model", "space", "--init", csv.to_str().unwrap(), "--dt", "0"]);
    assert_eq!(again.status.code(), Some(0));
}

#[test]
fn hierarchy_k_on_constant_is_minus_m_x() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsym(&[
        "hierarchy",
        "--model",
        "space",
        "--seed",
        "constant",
        "--apply",
        "K",
        "--m",
        "1.5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["levels"][1]["residual"], 0.0);
    let text = std::fs::read_to_string(dir.path().join("level_0001.csv")).unwrap();
    for line in text.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((cols[2] + 1.5 * cols[1]).abs() < 1e-12, "{line}");
        assert_eq!(cols[3], 0.0);
    }
}

#[test]
fn hierarchy_kk_residual_small() {
    let out = qsym(&["hierarchy", "--model", "space", "--seed", "constant", "--apply", "K,K", "--t", "0.4"]);
    assert_eq!(out.status.code(), Some(0));
    for l in json(&out)["levels"].as_array().unwrap() {
        assert!(l["residual"].as_f64().unwrap() <= 1e-12);
    }
}

#[test]
fn hierarchy_noise_is_not_a_solution() {
    let out = qsym(&["hierarchy", "--model", "space", "--seed", "noise", "--apply", "K"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a solution"));
}

#[test]
fn hierarchy_h_annihilates_and_stops() {
    let out = qsym(&["hierarchy", "--model", "space", "--seed", "constant", "--apply", "H,K,K"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["stopped_at_zero"], true);
    assert_eq!(v["levels"].as_array().unwrap().len(), 2);
}

#[test]
fn hierarchy_time_model() {
    let out = qsym(&["hierarchy", "--model", "time", "--seed", "constant", "--apply", "C,K,C", "--t", "0.3"]);
    assert_eq!(out.status.code(), Some(0));
    let out = qsym(&["hierarchy", "--model", "time", "--seed", "constant", "--apply", "H"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn expand_space_casimir() {
    let out = qsym(&["expand", "(1/z^2)*(1 - Sx^-1)^2 - 2*m*dt", "--order", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["coefficients"]["0"], "-2*m*dt + dx^2");
    assert_eq!(v["coefficients"]["1"], "-dx^3");
}

#[test]
fn dispersion_csv() {
    let out = qsym(&[
        "dispersion",
        "--model",
        "time",
        "--z",
        "0.5",
        "--m",
        "0.5",
        "--kmin",
        "0",
        "--kmax",
        "1",
        "--samples",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines, ["k,re,im", "0.0,1.0,0.0", "1.0,0.5,0.0"]);
}
