//! Browser bindings: analyze a rooted graph, sample a random tree, and
//! compare two rooted trees. Everything crosses the boundary as strings.

use serde_json::json;
use twtree::graph::{as_tree, bfs_levels, parse_edge_list, parse_parent_array, random_tree, to_parent_array, Graph};
use twtree::iso_cert::certificate;
use twtree::report::analyze;
use wasm_bindgen::prelude::*;

fn parse(text: &str, format: &str) -> Result<Graph, String> {
    match format {
        "edgelist" => parse_edge_list(text),
        "parents" => parse_parent_array(text),
        other => return Err(format!("unknown format {other:?}")),
    }
    .map_err(|e| e.to_string())
}

/// Report JSON plus the edge list, which the page needs for drawing.
pub fn analyze_json(text: &str, format: &str, root: usize, cap: usize) -> Result<String, String> {
    let graph = parse(text, format)?;
    let report = analyze(&graph, root, format, cap).map_err(|e| e.to_string())?;
    Ok(json!({ "report": report, "edges": graph.edges() }).to_string())
}

/// A uniform random labeled tree, as a parent array rooted at 0.
pub fn random_parents_text(n: usize, seed: u64) -> Result<String, String> {
    let t = random_tree(n, seed).map_err(|e| e.to_string())?;
    to_parent_array(&t).map_err(|e| e.to_string())
}

pub fn iso_json(a: &str, b: &str, format: &str) -> Result<String, String> {
    let cert = |text: &str| -> Result<String, String> {
        let t = as_tree(&bfs_levels(&parse(text, format)?, 0).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        Ok(certificate(&t).0.to_string())
    };
    let (ca, cb) = (cert(a)?, cert(b)?);
    Ok(json!({ "isomorphic": ca == cb, "a": ca, "b": cb }).to_string())
}

#[wasm_bindgen]
pub fn analyze_graph(text: &str, format: &str, root: usize, cap: usize) -> Result<String, JsError> {
    analyze_json(text, format, root, cap).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn random_parents(n: usize, seed: u32) -> Result<String, JsError> {
    random_parents_text(n, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn compare_trees(a: &str, b: &str, format: &str) -> Result<String, JsError> {
    iso_json(a, b, format).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_t6() {
        let out: serde_json::Value = serde_json::from_str(&analyze_json("0 0 1 1 2", "parents", 0, 32).unwrap()).unwrap();
        assert_eq!(out["report"]["dims"]["W0"], 5);
        assert_eq!(out["edges"].as_array().unwrap().len(), 5);
        assert!(analyze_json("0 0", "dot", 0, 32).is_err());
    }

    #[test]
    fn random_parents_roundtrip() {
        let text = random_parents_text(12, 5).unwrap();
        assert_eq!(text, random_parents_text(12, 5).unwrap());
        assert_eq!(parse_parent_array(&text).unwrap().n(), 12);
    }

    #[test]
    fn iso_examples() {
        let same: serde_json::Value = serde_json::from_str(&iso_json("0 0 1 1 2", "0 0 2 2 1", "parents").unwrap()).unwrap();
        assert_eq!(same["isomorphic"], true);
        let diff: serde_json::Value = serde_json::from_str(&iso_json("0 0", "0 1", "parents").unwrap()).unwrap();
        assert_eq!(diff["isomorphic"], false);
        assert!(iso_json("3\n0 1\n1 2\n0 2\n", "0 0", "edgelist").is_err());
    }
}
