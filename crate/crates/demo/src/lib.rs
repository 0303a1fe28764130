//! Browser bindings. Every entry point returns a JSON string.

use serde_json::json;
use wasm_bindgen::prelude::*;

use linkgrass::admissible::Strata;
use linkgrass::affine_weyl::DEFAULT_LEN_CAP;
use linkgrass::independence::weakly_independent;
use linkgrass::lattice::{is_convex, maximal_simplices, Configuration};
use linkgrass::multidegree::kn_instance;
use linkgrass::quiver::build_quiver;

fn err(e: impl ToString) -> String {
    e.to_string()
}

/// Admissible strata of the standard alcove.
pub fn alcove_strata(d: usize, r: usize) -> Result<String, String> {
    if !(2..=5).contains(&d) {
        return Err("d must be between 2 and 5".into());
    }
    let st = Strata::new(&Configuration::standard_alcove(d), r, DEFAULT_LEN_CAP).map_err(err)?;
    let rep = st.report().map_err(err)?;
    let v = json!({ "d": d, "r": r, "report": rep, "dot": rep.hasse_dot() });
    Ok(v.to_string())
}

/// Convexity, simplices, quiver and independence for a configuration given as `{"d", "vertices"}`.
pub fn analyze_config(input: &str) -> Result<String, String> {
    let g: Configuration = serde_json::from_str(input).map_err(err)?;
    let conv = is_convex(&g);
    let mut v = json!({
        "convex": conv.convex,
        "missing": conv.missing,
        "maximal_simplices": maximal_simplices(&g),
    });
    if conv.convex {
        let q = build_quiver(&g).map_err(err)?;
        v["weakly_independent"] = json!(weakly_independent(&q).independent);
        v["dot"] = json!(q.to_dot());
    }
    Ok(v.to_string())
}

pub fn complete_graph(n: usize) -> Result<String, String> {
    if n > 12 {
        return Err("n must be at most 12".into());
    }
    let rep = kn_instance(n).map_err(err)?;
    serde_json::to_string(&rep).map_err(err)
}

#[wasm_bindgen]
pub fn strata(d: usize, r: usize) -> Result<String, JsValue> {
    alcove_strata(d, r).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn analyze(input: &str) -> Result<String, JsValue> {
    analyze_config(input).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn kn(n: usize) -> Result<String, JsValue> {
    complete_graph(n).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strata_json() {
        let v: serde_json::Value = serde_json::from_str(&alcove_strata(3, 1).unwrap()).unwrap();
        assert_eq!(v["report"]["strata"].as_array().unwrap().len(), 7);
        assert!(alcove_strata(9, 1).is_err());
        assert!(alcove_strata(3, 3).is_err());
    }

    #[test]
    fn analyze_json() {
        let v: serde_json::Value =
            serde_json::from_str(&analyze_config(r#"{"d":3,"vertices":[[0,0,0],[1,0,0]]}"#).unwrap()).unwrap();
        assert_eq!(v["convex"], true);
        assert_eq!(v["weakly_independent"], true);
        assert!(analyze_config("{").is_err());
    }

    #[test]
    fn kn_json() {
        let v: serde_json::Value = serde_json::from_str(&complete_graph(4).unwrap()).unwrap();
        assert_eq!(v["ws"][1], json!([0, 3, 2, 1]));
    }
}
