//! Browser bindings: every entry point takes and returns JSON text.

use cpgame::equilibrium::{double_oracle_value, DoubleOracleLimits};
use cpgame::game::{payoff, Attack, Defense, Pure, Role};
use cpgame::generators::{generate, GenParams, GraphKind};
use cpgame::graph::GraphDocument;
use cpgame::response::attacker_best_response;
use cpgame::{Graph, Vertex};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Double-oracle rounds allowed per request; keeps the page responsive.
const MAX_ROUNDS: usize = 200;

fn graph(text: &str) -> Result<Graph, String> {
    GraphDocument::parse(text).map(|d| d.graph).map_err(|e| format!("graph: {e}"))
}

/// `[0,2]` or `{"vertices":[0,2],"budget":3}`.
fn strategy<R: Role>(text: &str, what: &str) -> Result<Pure<R>, String> {
    let value: Value = serde_json::from_str(text).map_err(|e| format!("{what}: {e}"))?;
    let parsed = match value {
        Value::Array(_) => serde_json::from_value::<Vec<Vertex>>(value)
            .map_err(|e| e.to_string())
            .and_then(|v| Pure::tight(v).map_err(|e| e.to_string())),
        other => serde_json::from_value(other).map_err(|e| e.to_string()),
    };
    parsed.map_err(|e| format!("{what}: {e}"))
}

pub fn payoff_report(graph_text: &str, defense: &str, attack: &str) -> Result<Value, String> {
    let g = graph(graph_text)?;
    let d: Defense = strategy(defense, "defense")?;
    let a: Attack = strategy(attack, "attack")?;
    let report = payoff(&g, &d, &a).map_err(|e| e.to_string())?;
    Ok(serde_json::to_value(report).expect("report serializes"))
}

pub fn best_attack(graph_text: &str, defense: &str, l: usize) -> Result<Value, String> {
    let g = graph(graph_text)?;
    let d: Defense = strategy(defense, "defense")?;
    let r = attacker_best_response(&g, &d, l).map_err(|e| e.to_string())?;
    Ok(json!({ "attack": r.strategy.vertices(), "value": r.value, "report": r.report }))
}

pub fn mixed_value(graph_text: &str, k: usize, l: usize) -> Result<Value, String> {
    let g = graph(graph_text)?;
    let limits = DoubleOracleLimits { max_iterations: MAX_ROUNDS, ..DoubleOracleLimits::default() };
    let r = double_oracle_value(&g, k, l, limits).map_err(|e| e.to_string())?;
    Ok(serde_json::to_value(r).expect("result serializes"))
}

pub fn generated(kind: &str, n: usize, seed: u64) -> Result<Value, String> {
    let kind: GraphKind = kind.parse().map_err(|e| format!("{e}"))?;
    let params = GenParams { n, ..GenParams::default() };
    let out = generate(kind, params, seed).map_err(|e| e.to_string())?;
    Ok(out.to_json_value())
}

fn to_js(result: Result<Value, String>) -> Result<String, JsError> {
    result.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

/// Payoffs of a pure defense against a pure attack.
#[wasm_bindgen]
pub fn evaluate_payoff(graph: &str, defense: &str, attack: &str) -> Result<String, JsError> {
    to_js(payoff_report(graph, defense, attack))
}

/// Exact best attack of size at most `l` against a pure defense.
#[wasm_bindgen]
pub fn best_response(graph: &str, defense: &str, l: usize) -> Result<String, JsError> {
    to_js(best_attack(graph, defense, l))
}

/// Mixed value with equilibrium strategies via double oracle.
#[wasm_bindgen]
pub fn game_value(graph: &str, k: usize, l: usize) -> Result<String, JsError> {
    to_js(mixed_value(graph, k, l))
}

/// Seeded instance of one of the generator families.
#[wasm_bindgen]
pub fn generate_graph(kind: &str, n: usize, seed: u64) -> Result<String, JsError> {
    to_js(generated(kind, n, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P3: &str = r#"{"n":3,"edges":[[0,1],[1,2]]}"#;

    #[test]
    fn payoff_on_a_path() {
        let r = payoff_report(P3, "[0]", "[1]").unwrap();
        assert_eq!(r["payoff_def"], 1);
        assert_eq!(r["payoff_att"], 2);
    }

    #[test]
    fn edge_lists_are_accepted() {
        let r = best_attack("3 2\n0 1\n1 2\n", "[1]", 1).unwrap();
        assert_eq!(r["value"], 3);
        assert_eq!(r["attack"], json!([1]));
    }

    #[test]
    fn k4_value() {
        let k4 = generated("clique", 4, 0).unwrap();
        let r = mixed_value(&k4["graph"].to_string(), 2, 2).unwrap();
        assert_eq!(r["value"], "5/3");
    }

    #[test]
    fn bad_input_is_reported() {
        assert!(payoff_report(P3, "[9]", "[1]").is_err());
        assert!(payoff_report("{", "[0]", "[1]").unwrap_err().starts_with("graph"));
        assert!(generated("hypercube", 4, 0).is_err());
    }
}
