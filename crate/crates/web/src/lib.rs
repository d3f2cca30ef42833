//! Browser bindings. Each export takes and returns JSON text; the plain
//! functions of the same name minus `_js` are usable natively.

use nonlocal_core::games;
use nonlocal_core::hardy;
use nonlocal_core::local;
use nonlocal_core::tobl::{self, Bipartition, ToblVerdict};
use nonlocal_core::{io, paper_data, rational, Behavior, Scenario};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn q(value: &nonlocal_core::Rational) -> Value {
    Value::String(rational::format(value))
}

/// Hardy witness, GYNI value and locality of one behavior.
pub fn analyze(behavior_json: &str) -> Result<String, String> {
    let behavior = io::behavior_from_json(behavior_json).map_err(|e| e.to_string())?;
    analyze_behavior(&behavior).map(|v| v.to_string())
}

fn analyze_behavior(behavior: &Behavior) -> Result<Value, String> {
    let e = |e: nonlocal_core::Error| e.to_string();
    behavior.validate().map_err(e)?;
    let no_signaling = behavior.is_no_signaling();
    let mut report = json!({ "valid": true, "no_signaling": no_signaling });
    if behavior.scenario().is_tripartite_binary() {
        let w = hardy::hardy_check(behavior, &hardy::canonical_pattern()).map_err(e)?;
        report["hardy"] = json!({
            "success": q(&w.success),
            "residuals": w.residuals.iter().map(|(c, v)| json!([c.to_string(), q(v)])).collect::<Vec<_>>(),
            "zeros_satisfied": w.zeros_satisfied,
            "post_quantum": w.post_quantum,
        });
        let gyni = games::evaluate(&games::gyni_expression(), behavior).map_err(e)?;
        report["gyni"] = json!({
            "value": q(&gyni),
            "bound": q(&games::gyni_bound()),
            "satisfied": games::satisfies(&gyni, &games::gyni_bound()),
        });
    }
    if no_signaling {
        let verdict = local::local_membership(behavior).map_err(e)?;
        report["local"] = Value::Bool(verdict.is_local());
    }
    Ok(report)
}

/// The embedded table mixed with white noise: `visibility · T + (1 − visibility) · U`.
pub fn noisy_table(visibility: &str) -> Result<String, String> {
    let v = rational::parse(visibility).map_err(|e| e.to_string())?;
    let mixed = paper_data::table1().mix(&Behavior::uniform(Scenario::tripartite()), &v).map_err(|e| e.to_string())?;
    let mut report = analyze_behavior(&mixed)?;
    report["behavior"] =
        serde_json::from_str(&io::behavior_to_json(&mixed).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    Ok(report.to_string())
}

/// TOBL membership of a tripartite behavior on one cut (`"A|BC"` etc.).
pub fn tobl_check(behavior_json: &str, cut: &str) -> Result<String, String> {
    let behavior = io::behavior_from_json(behavior_json).map_err(|e| e.to_string())?;
    let cut: Bipartition = cut.parse().map_err(|e: nonlocal_core::Error| e.to_string())?;
    let verdict = tobl::tobl_membership_marginal(&behavior, cut).map_err(|e| e.to_string())?;
    let report = match verdict {
        ToblVerdict::Member(d) => {
            json!({ "cut": cut.to_string(), "member": true, "terms": d.forward.len() })
        }
        ToblVerdict::NonMember(_) => json!({ "cut": cut.to_string(), "member": false }),
    };
    Ok(report.to_string())
}

#[wasm_bindgen]
pub fn analyze_js(behavior_json: &str) -> Result<String, JsValue> {
    analyze(behavior_json).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn noisy_table_js(visibility: &str) -> Result<String, JsValue> {
    noisy_table(visibility).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn tobl_check_js(behavior_json: &str, cut: &str) -> Result<String, JsValue> {
    tobl_check(behavior_json, cut).map_err(|e| JsValue::from_str(&e))
}
