//! Browser bindings: each export returns a JSON string that `www/demo.js`
//! renders. The `*_json` functions hold the logic so they can be tested
//! natively; the exports only convert errors.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use gt_systems::actions::{invariant_monomials, Action};
use gt_systems::arrangements::{build_arrangement, freeness_json, singular_census, ArrangementKind};
use gt_systems::classification::{classify_moves, ClassCounts};
use gt_systems::wlp::{gt_verdict, DIRECT_RANK_MAX_D};

/// Largest degree the page accepts; keeps each call well under a second.
pub const MAX_D: usize = 60;

fn check_d(d: usize) -> Result<(), String> {
    if d > MAX_D {
        return Err(format!("d is limited to {MAX_D} in the browser"));
    }
    Ok(())
}

pub fn invariants_json(d: usize, a: i64, b: i64, c: i64) -> Result<String, String> {
    check_d(d)?;
    let action = Action::new(d, [a, b, c]).map_err(|e| e.to_string())?;
    let gt = invariant_monomials(&action);
    let verdict = gt_verdict(&action).map_err(|e| e.to_string())?;
    let out = json!({
        "d": d,
        "mu": gt.mu(),
        "generators": gt.generators().iter().map(|m| json!({"exp": m.0, "display": m.to_string()})).collect::<Vec<_>>(),
        "verdict": verdict,
        "direct_check": d as u32 <= DIRECT_RANK_MAX_D,
    });
    Ok(out.to_string())
}

pub fn classify_json(d: usize) -> Result<String, String> {
    if d > 400 {
        return Err("classification is limited to d <= 400 in the browser".into());
    }
    let p = classify_moves(d).map_err(|e| e.to_string())?;
    let counts = ClassCounts::from_partition(&p);
    Ok(json!({"d": d, "classes": p.classes, "counts": counts}).to_string())
}

pub fn arrangement_json(kind: &str, d: usize) -> Result<String, String> {
    let k = match kind {
        "hd" => ArrangementKind::Hd,
        "fermat" => ArrangementKind::Fermat,
        other => return Err(format!("unknown arrangement {other:?}")),
    };
    if d > 8 {
        return Err("arrangements are limited to d <= 8 in the browser".into());
    }
    let lines = build_arrangement(k, d).map_err(|e| e.to_string())?;
    let census = singular_census(&lines).map_err(|e| e.to_string())?;
    let out: Value = json!({
        "lines": census.lines,
        "census": census.rows(),
        "c1": census.c1,
        "c2": census.c2(),
        "exponents": freeness_json(&census),
    });
    Ok(out.to_string())
}

#[wasm_bindgen]
pub fn invariants(d: usize, a: i32, b: i32, c: i32) -> Result<String, JsError> {
    invariants_json(d, a.into(), b.into(), c.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn classify(d: usize) -> Result<String, JsError> {
    classify_json(d).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn arrangement(kind: &str, d: usize) -> Result<String, JsError> {
    arrangement_json(kind, d).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_cubic() {
        let v: Value = serde_json::from_str(&invariants_json(3, 0, 1, 2).unwrap()).unwrap();
        assert_eq!(v["mu"], 4);
        assert_eq!(v["verdict"]["is_gt"], true);
    }

    #[test]
    fn classes_of_thirteen() {
        let v: Value = serde_json::from_str(&classify_json(13).unwrap()).unwrap();
        assert_eq!(v["classes"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn arrangement_h3() {
        let v: Value = serde_json::from_str(&arrangement_json("hd", 3).unwrap()).unwrap();
        assert_eq!(v["exponents"], json!([4, 7]));
        assert!(arrangement_json("ceva", 3).is_err());
        assert!(invariants_json(6, 0, 2, 4).is_err());
    }
}
