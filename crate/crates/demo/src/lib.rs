//! WebAssembly bindings behind the browser demo in `www/`.
//!
//! Every export takes and returns JSON text. The plain functions do the work
//! and are tested natively; the `#[wasm_bindgen]` wrappers only turn their
//! error strings into JavaScript exceptions.

use faircake::lp::{max_ue, price_of, FairnessConstraint};
use faircake::mechanism::{query_counts, run_mechanism, MechanismKind};
use faircake::report::RunReport;
use faircake::scenario::{Exact, Scenario};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const PRESETS: [(&str, &str); 5] = [
    ("Last Diminisher walkthrough", include_str!("../../cli/scenarios/last_diminisher.json")),
    ("Disjoint wishes", include_str!("../../cli/scenarios/disjoint.json")),
    ("Two short, two long", include_str!("../../cli/scenarios/price_of_proportionality.json")),
    ("Mixed densities", include_str!("../../cli/scenarios/piecewise_constant.json")),
    ("Envy-free, not proportional", include_str!("../../cli/scenarios/envy_free_not_proportional.json")),
];

/// Largest agent count the query chart will compute.
pub const MAX_CURVE_N: usize = 64;

#[derive(Serialize)]
struct Preset {
    name: &'static str,
    scenario: &'static str,
}

pub fn presets_json() -> String {
    let list: Vec<Preset> = PRESETS.iter().map(|&(name, scenario)| Preset { name, scenario }).collect();
    serde_json::to_string(&list).expect("presets serialize")
}

pub fn mechanisms_json() -> String {
    let names: Vec<&str> = MechanismKind::ALL.iter().map(|m| m.name()).collect();
    serde_json::to_string(&names).expect("names serialize")
}

/// Runs a mechanism on a scenario and returns the audit report.
pub fn run_report(scenario: &str, mechanism: &str) -> Result<String, String> {
    let kind: MechanismKind = mechanism.parse()?;
    let scenario = Scenario::parse(scenario).map_err(|e| e.to_string())?;
    let run = run_mechanism(kind, &scenario.valuations, scenario.profile.as_ref()).map_err(|e| e.to_string())?;
    let mut report = RunReport::audit("run", &scenario.ids, &scenario.valuations, &run.allocation)
        .map_err(|e| e.to_string())?
        .with_mechanism(kind.name());
    if let Some(t) = &run.transcript {
        report = report.with_queries(t);
    }
    Ok(report.to_json())
}

/// Query counts for `n = 1..=max_n` random agents.
pub fn query_rows(mechanism: &str, max_n: usize, seed: u64) -> Result<String, String> {
    let kind: MechanismKind = mechanism.parse()?;
    if !(1..=MAX_CURVE_N).contains(&max_n) {
        return Err(format!("agent count must be between 1 and {MAX_CURVE_N}"));
    }
    let rows = query_counts(kind, 1, max_n, seed).map_err(|e| e.to_string())?;
    let rows: Vec<[usize; 4]> = rows.iter().map(|q| [q.n, q.total, q.eval, q.cut]).collect();
    Ok(serde_json::to_string(&rows).expect("rows serialize"))
}

#[derive(Serialize)]
struct Price {
    criterion: String,
    unconstrained_ue: Exact,
    constrained_ue: Exact,
    price: Exact,
    approx: f64,
}

/// Utilitarian welfare with and without a fairness criterion, and their ratio.
pub fn price_row(scenario: &str, criterion: &str) -> Result<String, String> {
    let criterion: FairnessConstraint = criterion.parse()?;
    let scenario = Scenario::parse(scenario).map_err(|e| e.to_string())?;
    let vals = &scenario.valuations;
    let free = max_ue(vals, FairnessConstraint::None).map_err(|e| e.to_string())?.value;
    let fair = max_ue(vals, criterion).map_err(|e| e.to_string())?.value;
    let price = price_of(vals, criterion).map_err(|e| e.to_string())?;
    let approx = faircake::rational::to_f64(&price);
    let row = Price {
        criterion: criterion.to_string(),
        unconstrained_ue: Exact(free),
        constrained_ue: Exact(fair),
        price: Exact(price),
        approx,
    };
    Ok(serde_json::to_string(&row).expect("row serializes"))
}

#[wasm_bindgen]
pub fn presets() -> String {
    presets_json()
}

#[wasm_bindgen]
pub fn mechanisms() -> String {
    mechanisms_json()
}

#[wasm_bindgen(js_name = runMechanism)]
pub fn run_mechanism_js(scenario: &str, mechanism: &str) -> Result<String, JsError> {
    run_report(scenario, mechanism).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = queryCurve)]
pub fn query_curve_js(mechanism: &str, max_n: usize, seed: u32) -> Result<String, JsError> {
    query_rows(mechanism, max_n, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = priceOfFairness)]
pub fn price_of_fairness_js(scenario: &str, criterion: &str) -> Result<String, JsError> {
    price_row(scenario, criterion).map_err(|e| JsError::new(&e))
}
