//! Browser bindings for the demo page in `www/`. Every function returns a
//! JSON string; the plain `*_json` versions are usable without a browser.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use pgtower::cases::{self, descent_chain, fingerprint};
use pgtower::pcp::{parse_presentation, PcPresentation};
use pgtower::structure::{derived_series_factors, p_class};
use pgtower::tower::{run_config, search, Attach, ConstraintLattice, Root, SearchOptions, SearchResult};
use pgtower::descend::Limits;

/// Largest order `2^N` the demo lets a tree grow to.
pub const MAX_ORDER_LOG: usize = 10;

fn texts<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

pub fn case_list_json() -> String {
    let list: Vec<Value> = cases::all_cases()
        .iter()
        .map(|c| {
            json!({
                "id": c.id,
                "abelianization": c.abelianization,
                "subextension": c.subextension,
                "params": c.finals.params,
                "order_log": c.expected.order_log,
                "assignments": c.config().assignments().len(),
            })
        })
        .collect();
    Value::Array(list).to_string()
}

/// One final presentation; `values` maps parameter names to 0 or 1, and
/// missing parameters are 0.
pub fn final_group_json(case: &str, values: &str) -> Result<String, String> {
    let c = cases::case(case).map_err(|e| e.to_string())?;
    let given: BTreeMap<String, i64> = if values.trim().is_empty() {
        BTreeMap::new()
    } else {
        serde_json::from_str(values).map_err(|e| e.to_string())?
    };
    let (params, g) = c
        .finals
        .groups()
        .map_err(|e| e.to_string())?
        .into_iter()
        .find(|(p, _)| p.iter().all(|(k, v)| given.get(k).copied().unwrap_or(0) == *v))
        .ok_or("parameters must be 0 or 1")?;
    let chain = descent_chain(&g).map_err(|e| e.to_string())?;
    let f = fingerprint(&g);
    Ok(json!({
        "case": c.id,
        "params": params,
        "text": g.to_text(),
        "order_log": g.len(),
        "class": p_class(&g),
        "derived": texts(&derived_series_factors(&g)),
        "index_p": texts(&f.index_p),
        "index_p2": texts(&f.index_p2),
        "center_log": f.center_log,
        "exponent": f.exponent.map(|e| e as u64),
        "chain": chain.iter().map(|(h, _)| json!({"order_log": h.len(), "text": h.to_text()})).collect::<Vec<_>>(),
    })
    .to_string())
}

fn tree_json(r: &SearchResult) -> String {
    let nodes: Vec<Value> = r
        .nodes
        .iter()
        .map(|n| {
            json!({
                "id": n.id,
                "parent": n.parent,
                "label": n.label,
                "order_log": n.presentation.len(),
                "class": n.class,
                "step": n.step,
                "pairs": n.pairs,
                "candidate": n.candidate,
                "nucleus_rank": n.nucleus_rank,
                "multiplicator_rank": n.multiplicator_rank,
                "capped": n.capped,
                "text": n.presentation.to_text(),
            })
        })
        .collect();
    json!({ "status": r.status.to_string(), "nodes": nodes }).to_string()
}

fn limits(max_order_log: usize, max_class: u32) -> SearchOptions {
    let limits = Limits { max_order_log: Some(max_order_log.min(MAX_ORDER_LOG)), max_class: Some(max_class) };
    SearchOptions { limits, ..Default::default() }
}

/// Every descendant of the given group up to the limits.
pub fn descendant_tree_json(presentation: &str, max_order_log: usize, max_class: u32) -> Result<String, String> {
    let g: PcPresentation = parse_presentation(presentation).map_err(|e| e.to_string())?;
    if g.len() > max_order_log.min(MAX_ORDER_LOG) {
        return Err(format!("the root already has order 2^{}", g.len()));
    }
    let lat = ConstraintLattice::unconstrained("none", PcPresentation::elementary_abelian(g.prime(), 0));
    let root = Root { name: "G".into(), presentation: g, auts: None };
    // the trivial group is a quotient of everything, so no pair is lost
    let r = search(vec![root], &[lat], Attach::Surjective, &limits(max_order_log, max_class)).map_err(|e| e.to_string())?;
    Ok(tree_json(&r))
}

/// The first stage of a case under one assignment, cut at the limits.
pub fn case_tree_json(case: &str, assignment: usize, max_order_log: usize, max_class: u32) -> Result<String, String> {
    let c = cases::case(case).map_err(|e| e.to_string())?;
    let cfg = c.config();
    let all = cfg.assignments();
    let a = all.iter().find(|a| a.index == assignment).ok_or(format!("assignment {assignment} of {}", all.len()))?;
    let runs = run_config(&cfg, a, Some(0), &limits(max_order_log, max_class)).map_err(|e| e.to_string())?;
    Ok(tree_json(&runs[0].result))
}

#[wasm_bindgen]
pub fn case_list() -> String {
    case_list_json()
}

#[wasm_bindgen]
pub fn final_group(case: &str, values: &str) -> Result<String, JsError> {
    final_group_json(case, values).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn descendant_tree(presentation: &str, max_order_log: usize, max_class: u32) -> Result<String, JsError> {
    descendant_tree_json(presentation, max_order_log, max_class).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn case_tree(case: &str, assignment: usize, max_order_log: usize, max_class: u32) -> Result<String, JsError> {
    case_tree_json(case, assignment, max_order_log, max_class).map_err(|e| JsError::new(&e))
}
