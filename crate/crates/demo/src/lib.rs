//! wasm-bindgen bindings for the static page in `www/`. Every export
//! returns a JSON string; the `*_json` functions hold the logic so they
//! can be tested natively.

use qcournot::fmt::round_sig;
use qcournot::model::MarketParams;
use qcournot::quantum_game::EntangleParams;
use qcournot::solver::closed_form_report;
use qcournot::sweep::{equal_entropy_comparison, figure_series, FigureId, SweepRow};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Closed-form equilibrium report at `(gamma1, gamma2, gamma12)`.
pub fn equilibrium_json(gamma1: f64, gamma2: f64, gamma12: f64, k: f64) -> Result<String, String> {
    let params = EntangleParams::new(gamma1, gamma2, gamma12).map_err(|e| e.to_string())?;
    let market = MarketParams::from_margin(k).map_err(|e| e.to_string())?;
    let report = closed_form_report(&params, &market).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

/// All series of one figure, column-oriented for plotting.
pub fn figure_json(id: &str, k: f64) -> Result<String, String> {
    let id = FigureId::parse(id).ok_or_else(|| format!("unknown figure '{id}'"))?;
    let series = figure_series(id, k).map_err(|e| e.to_string())?;
    let series: Vec<Value> = series
        .iter()
        .map(|s| {
            let mut obj = columns(&s.rows);
            obj["label"] = json!(s.label);
            obj
        })
        .collect();
    Ok(json!({ "figure": id.as_str(), "x_column": id.x_column(), "series": series }).to_string())
}

/// Equilibria sharing entanglement entropy `entropy`, one per dgamma.
/// `dgammas` is a comma-separated list.
pub fn equal_entropy_json(entropy: f64, dgammas: &str, k: f64) -> Result<String, String> {
    let values = dgammas
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad dgamma '{}'", s.trim()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rows = equal_entropy_comparison(entropy, &values, k).map_err(|e| e.to_string())?;
    Ok(columns(&rows).to_string())
}

fn columns(rows: &[SweepRow]) -> Value {
    let col = |f: fn(&SweepRow) -> f64| -> Vec<f64> { rows.iter().map(|r| round_sig(f(r))).collect() };
    json!({
        "gamma12": col(|r| r.gamma12),
        "dgamma": col(|r| r.dgamma),
        "x1": col(|r| r.x1),
        "x2": col(|r| r.x2),
        "u1": col(|r| r.u1),
        "u2": col(|r| r.u2),
        "u_total": col(|r| r.u_total),
        "entropy": col(|r| r.entropy),
        "asymmetry": col(|r| r.asymmetry),
    })
}

#[wasm_bindgen]
pub fn equilibrium(gamma1: f64, gamma2: f64, gamma12: f64, k: f64) -> Result<String, JsError> {
    equilibrium_json(gamma1, gamma2, gamma12, k).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn figure(id: &str, k: f64) -> Result<String, JsError> {
    figure_json(id, k).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = equalEntropy)]
pub fn equal_entropy(entropy: f64, dgammas: &str, k: f64) -> Result<String, JsError> {
    equal_entropy_json(entropy, dgammas, k).map_err(|e| JsError::new(&e))
}
