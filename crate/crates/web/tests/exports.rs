use serde_json::Value;

use qsym_web::{evolve_space, normal_order, verify};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn normal_order_of_weyl_bracket() {
    let v = parse(normal_order("[dx, x]", 2));
    assert_eq!(v["normal_form"], "1");
    assert_eq!(v["series"][0]["term"], "1");
}

#[test]
fn normal_order_reports_syntax_errors() {
    let v = parse(normal_order("x +", 2));
    assert!(v["error"].as_str().unwrap().contains("offset 3"));
}

#[test]
fn pole_shows_as_series_error() {
    let v = parse(normal_order("x/z", 2));
    assert_eq!(v["normal_form"], "z^-1*x");
    assert!(v["series_error"].is_string());
}

#[test]
fn verify_time_relations() {
    let v = parse(verify("time", "relations", ""));
    assert_eq!(v["passed"], 15);
    assert_eq!(v["failed"], 0);
}

#[test]
fn verify_rejects_bad_input() {
    assert!(parse(verify("space", "relations", "x")).get("error").is_some());
    assert!(parse(verify("bogus", "relations", "")).get("error").is_some());
}

#[test]
fn evolution_frames_are_solutions() {
    let v = parse(evolve_space(64, 0.125, 1.0, 3, 0.002, 5));
    let frames = v["frames"].as_array().unwrap();
    assert_eq!(frames.len(), 5);
    for f in frames {
        assert!(f["residual"].as_f64().unwrap() < 1e-10);
        assert_eq!(f["re"].as_array().unwrap().len(), 64);
    }
}
