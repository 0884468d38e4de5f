//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export takes the support as text (one point per line) and a facet
//! selection as comma-separated indices, empty for automatic, and returns JSON.

use num_traits::Zero;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use resultant_core::bracket::{format_entry, BracketMatrix, CoefficientSystem};
use resultant_core::ehrhart::EhrhartPair;
use resultant_core::geometry::{parse_support, FacetSelection, LatticePolytope};
use resultant_core::shelling::{best_selection, from_selection, SearchStrategy};
use resultant_core::verify::{common_root_system, random_torus_point};

fn setup(support: &str, indices: &str) -> Result<(LatticePolytope, FacetSelection), String> {
    let points = parse_support(support).map_err(|e| e.to_string())?;
    let q = LatticePolytope::from_points(&points).map_err(|e| e.to_string())?;
    if q.dim() != 3 {
        return Err(format!("the demo handles 3-dimensional supports, this one has dimension {}", q.dim()));
    }
    let shelling = if indices.trim().is_empty() {
        best_selection(&q, &SearchStrategy::default())
    } else {
        let idx = indices
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad facet index `{t}`")))
            .collect::<Result<Vec<_>, _>>()?;
        FacetSelection::proper(&q, &idx).and_then(|sel| from_selection(&q, &sel))
    }
    .map_err(|e| e.to_string())?;
    let sel = shelling.selection().clone();
    Ok((q, sel))
}

/// Geometry, selection and Ehrhart predictions.
pub fn analyze_json(support: &str, indices: &str) -> Result<Value, String> {
    let (q, sel) = setup(support, indices)?;
    let pair = EhrhartPair::new(&q, &sel).map_err(|e| e.to_string())?;
    let edges: Vec<&Vec<usize>> = q.faces(1).iter().map(|e| &e.vertices).collect();
    let facets: Vec<Value> = (0..q.num_facets())
        .map(|i| json!({ "normal": q.facets()[i].normal, "vertices": q.facet_vertices(i), "selected": sel.contains(i) }))
        .collect();
    Ok(json!({
        "vertices": q.vertices(),
        "edges": edges,
        "facets": facets,
        "selection": sel.indices(),
        "lattice_points": q.lattice_points_scaled(1).len(),
        "size": pair.predicted_size(),
        "volume": pair.volume,
        "interior_points": pair.interior_points,
        "boundary_points": pair.boundary_points,
        "selection_boundary_points": pair.selection_boundary_points,
        "p": pair.p.to_string(),
        "p_I": pair.p_i.to_string(),
    }))
}

/// The bracket matrix with entries rendered as text.
pub fn matrix_json(support: &str, indices: &str) -> Result<Value, String> {
    let (q, sel) = setup(support, indices)?;
    let m = BracketMatrix::build(&q, &sel).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<String>> = m.entries.iter().map(|r| r.iter().map(format_entry).collect()).collect();
    Ok(json!({
        "size": m.size(),
        "b_rows": m.b_rows,
        "b_cols": m.b_cols,
        "points": m.points,
        "rows": rows,
    }))
}

/// Determinant at a system with a common root and at a generic system.
pub fn evaluate_json(support: &str, indices: &str, seed: u64) -> Result<Value, String> {
    let (q, sel) = setup(support, indices)?;
    let m = BracketMatrix::build(&q, &sel).map_err(|e| e.to_string())?;
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let x = random_torus_point(3, &mut rng);
    let rooted = common_root_system(&m.points, &x, seed).map_err(|e| e.to_string())?;
    let generic = CoefficientSystem::random(m.num_points(), &mut rng);
    let d_root = m.evaluate(&rooted).map_err(|e| e.to_string())?;
    let d_gen = m.evaluate(&generic).map_err(|e| e.to_string())?;
    Ok(json!({
        "root": x.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "rooted_determinant": d_root.to_string(),
        "rooted_vanishes": d_root.is_zero(),
        "generic_determinant": d_gen.to_string(),
    }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn analyze(support: &str, indices: &str) -> Result<String, JsValue> {
    to_js(analyze_json(support, indices))
}

#[wasm_bindgen]
pub fn build_matrix(support: &str, indices: &str) -> Result<String, JsValue> {
    to_js(matrix_json(support, indices))
}

#[wasm_bindgen]
pub fn evaluate(support: &str, indices: &str, seed: u32) -> Result<String, JsValue> {
    to_js(evaluate_json(support, indices, u64::from(seed)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUBE: &str = "0 0 0\n0 0 1\n0 1 0\n0 1 1\n1 0 0\n1 0 1\n1 1 0\n1 1 1\n";

    #[test]
    fn cube_round() {
        let a = analyze_json(CUBE, "").unwrap();
        assert_eq!(a["size"], 6);
        assert_eq!(a["facets"].as_array().unwrap().len(), 6);
        let m = matrix_json(CUBE, "").unwrap();
        assert_eq!(m["size"], 6);
        let e = evaluate_json(CUBE, "", 3).unwrap();
        assert_eq!(e["rooted_vanishes"], true);
    }

    #[test]
    fn errors_are_messages() {
        assert!(analyze_json("0 0 0\n1 0 0\n", "").is_err());
        assert!(analyze_json(CUBE, "0,x").is_err());
        assert!(analyze_json(CUBE, "2,3").is_err());
    }
}
