//! WebAssembly bindings for the page in `www/`. Each export takes strings and
//! numbers straight from form fields and returns a JSON document. The work
//! happens in the `*_json` functions, which also build natively so they can
//! be tested without a browser.

use dirichlet_moments::hypergeo::{
    lauricella_poly, r_series_partial_sums, watson_product, LauricellaMethod, LauricellaSpec, SeriesControl,
};
use dirichlet_moments::moments::dirichlet_moment_auto;
use dirichlet_moments::multiindex::{enumerate_indices, IndexConstraint};
use dirichlet_moments::{DirichletParams, KnotSet, MultiIndex};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

type Res<T> = Result<T, String>;

fn list(name: &str, text: &str) -> Res<Vec<f64>> {
    let v: Vec<f64> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<f64>().map_err(|e| format!("{name}: `{p}`: {e}")))
        .collect::<Res<_>>()?;
    if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
        return Err(format!("{name}: {bad} is not finite"));
    }
    Ok(v)
}

/// One knot per line, coordinates separated by commas or spaces.
fn knots(text: &str) -> Res<KnotSet> {
    let points: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| list("knots", l))
        .collect::<Res<_>>()?;
    KnotSet::new(points).map_err(|e| e.to_string())
}

fn params(text: &str, len: usize) -> Res<DirichletParams> {
    if text.trim().is_empty() || text.trim() == "ones" {
        return Ok(DirichletParams::ones(len));
    }
    DirichletParams::new(list("params", text)?).map_err(|e| e.to_string())
}

/// `L_j(x)` by all three methods with `x_1` swept over `[lo, hi]` and the
/// remaining coordinates fixed. A method that cannot evaluate a point
/// reports `null` there and its first error in `notes`.
pub fn lauricella_curve_json(j: &str, beta: &str, gamma: f64, x_rest: &str, lo: f64, hi: f64, points: u32) -> Res<String> {
    let j: MultiIndex = j.parse().map_err(|e: dirichlet_moments::Error| e.to_string())?;
    let beta = list("beta", beta)?;
    let rest = list("x", x_rest)?;
    if rest.len() + 1 != j.dim() {
        return Err(format!("j has {} entries, so x needs {} fixed coordinates", j.dim(), j.dim() - 1));
    }
    if !(2..=400).contains(&points) || !(lo < hi) {
        return Err("need 2..=400 points and lo < hi".into());
    }
    let ctrl = SeriesControl::default();
    let methods = [
        ("series", LauricellaMethod::Series),
        ("moments", LauricellaMethod::Moments),
        ("recurrence", LauricellaMethod::Recurrence),
    ];
    let xs: Vec<f64> = (0..points)
        .map(|i| lo + (hi - lo) * f64::from(i) / f64::from(points - 1))
        .collect();
    let mut curves = serde_json::Map::new();
    let mut notes = serde_json::Map::new();
    for (name, method) in methods {
        let mut ys = Vec::with_capacity(xs.len());
        for &x1 in &xs {
            let mut x = vec![x1];
            x.extend(&rest);
            let value = LauricellaSpec::polynomial(j.clone(), beta.clone(), gamma, x)
                .and_then(|spec| lauricella_poly(&spec, method, &ctrl));
            match value {
                Ok(v) => ys.push(json!(v)),
                Err(e) => {
                    notes.entry(name).or_insert_with(|| json!(e.to_string()));
                    ys.push(Value::Null);
                }
            }
        }
        curves.insert(name.into(), Value::Array(ys));
    }
    Ok(json!({ "x": xs, "curves": curves, "notes": notes }).to_string())
}

/// Every moment of total order up to `max_order`, each from the first
/// strategy whose preconditions hold.
pub fn moment_table_json(knot_text: &str, params_text: &str, max_order: u32) -> Res<String> {
    if max_order > 12 {
        return Err("max order is capped at 12 in the demo".into());
    }
    let k = knots(knot_text)?;
    let p = params(params_text, k.len())?;
    let mut rows = Vec::new();
    for r in 0..=max_order {
        for beta in enumerate_indices(IndexConstraint::Order(r), k.dim()) {
            let m = dirichlet_moment_auto(&p, &k, &beta).map_err(|e| format!("β = {beta}: {e}"))?;
            rows.push(json!({
                "beta": beta.to_string(),
                "value": m.value,
                "strategy": m.strategy.name(),
                "table_size": m.table_size,
            }));
        }
    }
    Ok(json!({ "rows": rows }).to_string())
}

/// Partial sums of the `a = c` series against the closed product.
pub fn watson_convergence_json(knot_text: &str, params_text: &str, lambda: &str, order: u32) -> Res<String> {
    if order > 64 {
        return Err("truncation order is capped at 64 in the demo".into());
    }
    let k = knots(knot_text)?;
    let p = params(params_text, k.len())?;
    let lambda = list("lambda", lambda)?;
    let product = watson_product(&lambda, &k, &p).map_err(|e| e.to_string())?;
    let sums = r_series_partial_sums(p.c(), &p, &k, &lambda, order).map_err(|e| e.to_string())?;
    let residuals: Vec<f64> = sums.iter().map(|s| (s - product).abs()).collect();
    Ok(json!({ "product": product, "partial_sums": sums, "residuals": residuals }).to_string())
}

#[wasm_bindgen]
pub fn lauricella_curve(j: &str, beta: &str, gamma: f64, x_rest: &str, lo: f64, hi: f64, points: u32) -> Result<String, JsError> {
    lauricella_curve_json(j, beta, gamma, x_rest, lo, hi, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn moment_table(knots: &str, params: &str, max_order: u32) -> Result<String, JsError> {
    moment_table_json(knots, params, max_order).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn watson_convergence(knots: &str, params: &str, lambda: &str, order: u32) -> Result<String, JsError> {
    watson_convergence_json(knots, params, lambda, order).map_err(|e| JsError::new(&e))
}
