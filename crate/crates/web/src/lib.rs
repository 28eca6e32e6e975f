//! WebAssembly entry points for the static page in `www/`. Each returns a
//! JSON table `{columns, rows, ...}`; the page renders it.

use qlorentz::braid::{catalog, parse_braid_auto, BraidWord};
use qlorentz::invariants::x_invariant;
use qlorentz::jones::jones_z_interpolated;
use qlorentz::qlg::{NumericP, QlgEngine, QuantumCg};
use qlorentz::scalar::{GaussianRational, Poly};
use serde_json::{json, Value};
use std::sync::Arc;
use wasm_bindgen::prelude::*;

/// Keeps page requests to a few seconds.
pub const MAX_ORDER: usize = 6;
pub const MAX_LAMBDA_ORDER: usize = 8;

fn knot(text: &str) -> Result<BraidWord, String> {
    let t = text.trim();
    if t.contains(['s', 'S']) && t.split_whitespace().all(|w| w.trim_start_matches('-').starts_with(['s', 'S'])) {
        parse_braid_auto(t).map_err(|e| e.to_string())
    } else {
        catalog(t).map(|k| k.braid).map_err(|e| e.to_string())
    }
}

fn check_order(order: usize, max: usize) -> Result<(), String> {
    if order > max {
        Err(format!("order is limited to {max} here"))
    } else {
        Ok(())
    }
}

fn poly_rows(series: &[Poly<GaussianRational>], var: &str) -> Vec<Value> {
    series.iter().enumerate().map(|(n, c)| json!([n, c.to_string_in(var)])).collect()
}

/// h^n coefficients of the z-coloured Jones series J^z/(2z+1) at zero framing.
pub fn jones_table_json(knot_text: &str, order: usize) -> Result<Value, String> {
    check_order(order, MAX_ORDER)?;
    let b = knot(knot_text)?;
    let s = jones_z_interpolated(&b, order).map_err(|e| e.to_string())?;
    Ok(json!({ "title": format!("J^z/(2z+1) for {b}"), "columns": ["n", "coefficient of h^n"], "rows": poly_rows(s.coeffs(), "z") }))
}

/// h^n coefficients of X(m, p, K) as polynomials in p.
pub fn lorentz_table_json(knot_text: &str, m: i64, order: usize) -> Result<Value, String> {
    check_order(order, MAX_ORDER)?;
    let b = knot(knot_text)?;
    let x = x_invariant(&b, m, order).map_err(|e| e.to_string())?;
    Ok(json!({
        "title": format!("X({m}, p) for {b}"),
        "columns": ["n", "coefficient of h^n"],
        "rows": poly_rows(x.series.coeffs(), "p"),
        "structure_ok": x.structure().ok(),
    }))
}

/// Λ^{ABC}_D at numeric p, labels given doubled as "2A,2B,2C,2D".
pub fn lambda_series_json(labels: &str, p: &str, order: usize, digits: usize) -> Result<Value, String> {
    check_order(order, MAX_LAMBDA_ORDER)?;
    let l: Vec<i64> = labels
        .split(',')
        .map(|t| t.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("labels must be four integers such as 2,1,3,2; got '{labels}'"))?;
    let [a, b, c, d] = l[..] else { return Err("exactly four labels are needed".into()) };
    if l.iter().any(|x| *x < 0 || *x > 2 * MAX_LAMBDA_ORDER as i64) {
        return Err("labels must lie between 0 and twice the order limit".into());
    }
    let pv: GaussianRational = p.parse().map_err(|e| format!("{e}"))?;
    let digits = digits.clamp(30, 120);
    let e = QlgEngine::new(NumericP(pv), Arc::new(QuantumCg::new(order, digits)));
    let s = e.lambda_coeff(a, b, c, d);
    let rows: Vec<Value> =
        s.coeffs().iter().enumerate().map(|(n, z)| json!([n, z.chop(1e-25).to_decimal_string(20)])).collect();
    Ok(json!({
        "title": format!("Λ with doubled labels {a},{b},{c},{d} at p = {p}"),
        "columns": ["n", "coefficient of h^n"],
        "rows": rows,
    }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn jones_table(knot: &str, order: usize) -> Result<String, JsError> {
    to_js(jones_table_json(knot, order))
}

#[wasm_bindgen]
pub fn lorentz_table(knot: &str, m: i32, order: usize) -> Result<String, JsError> {
    to_js(lorentz_table_json(knot, m as i64, order))
}

#[wasm_bindgen]
pub fn lambda_series(labels: &str, p: &str, order: usize, digits: usize) -> Result<String, JsError> {
    to_js(lambda_series_json(labels, p, order, digits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables() {
        let j = jones_table_json("unknot", 2).unwrap();
        assert_eq!(j["rows"][2][1], "1/6*z^2 + 1/6*z");
        let x = lorentz_table_json("s1 s1 s1", 0, 2).unwrap();
        assert_eq!(x["structure_ok"], true);
        assert_eq!(x["rows"].as_array().unwrap().len(), 3);
        let l = lambda_series_json("0,0,0,0", "3", 2, 40).unwrap();
        assert_eq!(l["rows"][0][1], "1");
        assert_eq!(l["rows"][1][1], "0");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(jones_table_json("s1 s1", 2).is_err());
        assert!(jones_table_json("unknot", 40).is_err());
        assert!(lambda_series_json("1,2", "3", 2, 40).is_err());
        assert!(lambda_series_json("2,1,3,2", "x", 2, 40).is_err());
    }
}
