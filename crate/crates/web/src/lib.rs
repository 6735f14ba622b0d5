//! wasm-bindgen surface for the static demo page in `www/`.
//!
//! Every export returns a JSON string; failures come back as
//! `{"error": "..."}` so the page needs no exception handling and the
//! functions stay testable off the browser.

use num_complex::Complex64;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use qsym::lattice::{space_evolve, Boundary, SolutionField, SpaceGridField};
use qsym::model::ModelKind;
use qsym::parse::parse_operator;
use qsym::series::series_expand;
use qsym::suite::{run_suite, Suite};
use qsym::Rational;

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Normal form of an operator expression and its series in `z`.
#[wasm_bindgen]
pub fn normal_order(src: &str, order: u32) -> String {
    respond((|| {
        let op = parse_operator(src).map_err(|e| e.to_string())?;
        let series = series_expand(&op, order.min(12));
        let coefficients: Vec<Value> = match &series {
            Ok(s) => s.terms().map(|(k, e)| json!({ "order": k, "term": e.to_string() })).collect(),
            Err(_) => Vec::new(),
        };
        Ok(json!({
            "normal_form": op.to_string(),
            "series": coefficients,
            "series_error": series.err().map(|e| e.to_string()),
        }))
    })())
}

/// Runs a verification suite; `a` is a rational or empty for symbolic.
#[wasm_bindgen]
pub fn verify(model: &str, suite: &str, a: &str) -> String {
    respond((|| {
        let kind: ModelKind = model.parse().map_err(|e: qsym::Error| e.to_string())?;
        let suite: Suite = suite.parse().map_err(|e: qsym::Error| e.to_string())?;
        let a = match a.trim() {
            "" => None,
            s => Some(s.parse::<Rational>().map_err(|_| format!("`{s}` is not a rational number"))?),
        };
        let report = run_suite(kind, suite, a, qsym::series::DEFAULT_ORDER).map_err(|e| e.to_string())?;
        serde_json::to_value(report).map_err(|e| e.to_string())
    })())
}

/// Evolves a periodic Gaussian bump plus a single mode of wavenumber `k`
/// and returns `frames` snapshots of the real part.
#[wasm_bindgen]
pub fn evolve_space(points: usize, z: f64, m: f64, k: i64, dt: f64, frames: usize) -> String {
    respond((|| {
        let n = points.clamp(4, 1024);
        let width = n as f64 * z;
        let theta = std::f64::consts::TAU * k as f64 / n as f64;
        let values = (0..n)
            .map(|j| {
                let x = j as f64 * z - width / 2.0;
                Complex64::new((-x * x / (0.02 * width * width)).exp(), 0.0)
                    + 0.25 * Complex64::from_polar(1.0, theta * j as f64)
            })
            .collect();
        let mut f =
            SpaceGridField::from_values(values, 0.0, z, m, -0.5, 0.0, Boundary::Periodic).map_err(|e| e.to_string())?;
        let mut out = Vec::new();
        for i in 0..frames.clamp(1, 200) {
            if i > 0 {
                f = space_evolve(&f, dt).map_err(|e| e.to_string())?;
            }
            out.push(json!({
                "t": f.time,
                "residual": f.residual(),
                "re": f.values.iter().map(|c| c.re).collect::<Vec<_>>(),
            }));
        }
        Ok(json!({ "x": (0..n).map(|j| f.x(j)).collect::<Vec<_>>(), "frames": out }))
    })())
}
