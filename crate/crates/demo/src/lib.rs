//! Browser bindings for the demo page in `www/`.
//!
//! Each export takes and returns JSON text so the page needs no generated
//! type glue. The work happens in plain functions that the native tests
//! call directly.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use cyclogon::generators::{gen_vertices_on_circle, generate, Target};
use cyclogon::io::{parse_json, PolygonInput};
use cyclogon::patterns::certify_non_convexity;
use cyclogon::svg::{render, Highlight};
use cyclogon::{analyze_profile, analyze_vertices, Analysis, AngleProfile, Circle, Tolerance};

fn tolerance(eps: f64) -> Result<Tolerance, String> {
    if eps.is_finite() && eps >= 0.0 {
        Ok(Tolerance::with_geom(eps))
    } else {
        Err(format!("tolerance must be a finite non-negative number, got {eps}"))
    }
}

fn report(a: &Analysis, tol: Tolerance) -> Value {
    let mut out = json!({
        "convex": a.verdict.is_convex(),
        "label": a.verdict.label(),
        "verdict": a.verdict.to_string(),
        "winding": a.profile.winding(),
        "thetas": a.profile.thetas(),
        "distinguished_index": a.verdict.distinguished_index(),
    });
    let mut highlight = None;
    if !a.verdict.is_convex() {
        if let Ok(c) = certify_non_convexity(&a.profile, tol) {
            let (i, j, k) = c.original_indices();
            highlight = Some(Highlight {
                edge: i,
                vertices: [j, k],
            });
            out["certificate"] = json!({
                "pattern": c.reduction.pattern.to_string(),
                "shift": c.reduction.shift,
                "reversed": c.reduction.reversed,
                "edge": i,
                "vertices": [j, k],
                "delta_j": c.delta_j.value,
                "delta_k": c.delta_k.value,
                "product": c.product,
            });
        }
    }
    out["svg"] = Value::from(render(&a.polygon, Some(&a.verdict.to_string()), highlight));
    out
}

/// Classify a `{"vertices": ...}` or `{"thetas": ...}` document.
pub fn classify_document(text: &str, eps: f64) -> Result<Value, String> {
    let tol = tolerance(eps)?;
    let analysis = match parse_json(text).map_err(|e| e.to_string())? {
        PolygonInput::Vertices(v) => analyze_vertices(&v, tol),
        PolygonInput::Thetas(t) => AngleProfile::new(t, tol).and_then(|p| analyze_profile(p, tol)),
    }
    .map_err(|e| e.to_string())?;
    Ok(report(&analysis, tol))
}

/// A random polygon of the requested class, as a vertex document on the
/// unit circle.
pub fn random_document(target: &str, n: usize, seed: u64) -> Result<Value, String> {
    let target: Target = target.parse().map_err(|e: cyclogon::Error| e.to_string())?;
    let profile = generate(target, n, seed).map_err(|e| e.to_string())?;
    let vertices = gen_vertices_on_circle(&profile, Circle::unit(), 0.0);
    Ok(json!({ "vertices": vertices }))
}

fn to_js(result: Result<Value, String>) -> Result<String, JsError> {
    result.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn classify(text: &str, eps: f64) -> Result<String, JsError> {
    to_js(classify_document(text, eps))
}

#[wasm_bindgen]
pub fn random_polygon(target: &str, n: usize, seed: u32) -> Result<String, JsError> {
    to_js(random_document(target, n, u64::from(seed)))
}

/// Labels accepted by `random_polygon`, with their minimum vertex counts.
#[wasm_bindgen]
pub fn targets() -> String {
    let list: Vec<Value> = Target::ALL
        .iter()
        .map(|t| json!({ "label": t.label(), "convex": t.is_convex(), "min_vertices": t.min_vertices() }))
        .collect();
    Value::from(list).to_string()
}
