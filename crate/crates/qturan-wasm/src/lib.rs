//! Browser bindings for the interactive demo page: construction viewer,
//! bound curves, and small exact solves. All heavy lifting stays in the
//! core crate; this layer shapes JSON for the canvas/SVG front end.
//!
//! Big values travel as decimal strings; ratios to 2^n travel as floats.

use num_traits::ToPrimitive;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use qturan::chains;
use qturan::construct;
use qturan::detect;
use qturan::hypercube::{binomial, Vertex};
use qturan::solver::{self, SolveMethod, SolveOptions};
use qturan::{Dim, Error, Pattern};

/// Largest n the demo materializes a family for (chain profile, solver
/// witnesses).
const DEMO_PROFILE_DIM: u32 = 14;

fn ratio_to_pow2(v: &qturan::BigUint, n: u32) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(n as i32)
}

fn err_to_js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

fn pattern_summary(p: &Pattern) -> Value {
    let info = p.info();
    json!({
        "name": p.name(),
        "vertices": p.vertex_count(),
        "edges": p.edges().iter().map(|&(u, v)| json!([u, v])).collect::<Vec<_>>(),
        "height": info.height,
        "is_tree": info.is_tree,
        "is_saturated": info.is_saturated,
    })
}

fn construction_value(pattern: &str, n: u32) -> Result<Value, Error> {
    let p = Pattern::parse(pattern)?;
    let (kind, levels) = construct::best_construction(n, &p)?;
    let size = levels.size();
    let row: Vec<Value> = (0..=n)
        .map(|i| {
            let b = binomial(n, i).expect("n within cap");
            json!({
                "level": i,
                "count": b.to_string(),
                "ratio": ratio_to_pow2(&b, n),
                "included": levels.contains(i),
            })
        })
        .collect();
    let freeness = construct::certify_levels_free(&levels, &p)
        .unwrap_or_else(|| "checked by the embedding detector".into());

    let (mut profile, mut lubell) = (Value::Null, Value::Null);
    if n <= DEMO_PROFILE_DIM {
        let dim = Dim::new(n)?;
        let fam = construct::levels_family(dim, &levels)?;
        debug_assert!(detect::contains_copy(&fam, &p).is_none());
        let stats = chains::chain_profile(&fam)?;
        let total = stats.total().to_f64().unwrap_or(f64::INFINITY);
        profile = json!(stats
            .counts()
            .iter()
            .enumerate()
            .map(|(t, c)| json!({
                "t": t,
                "count": c.to_string(),
                "share": c.to_f64().unwrap_or(f64::INFINITY) / total,
            }))
            .collect::<Vec<_>>());
        lubell = json!(chains::lubell(&fam).as_f64());
    }
    Ok(json!({
        "pattern": pattern_summary(&p),
        "n": n,
        "kind": format!("{kind:?}"),
        "levels": levels.levels(),
        "size": size.to_string(),
        "size_ratio": ratio_to_pow2(&size, n),
        "per_level": row,
        "freeness": freeness,
        "lubell": lubell,
        "chain_profile": profile,
    }))
}

fn bounds_value(pattern: &str, n_from: u32, n_to: u32) -> Result<Value, Error> {
    if n_from > n_to {
        return Err(Error::ParamRange(format!("empty range {n_from}..{n_to}")));
    }
    let p = Pattern::parse(pattern)?;
    let info = p.info();
    let is_path = p.is_directed_path();
    let mut rows = Vec::new();
    for n in n_from..=n_to {
        let Ok((_, levels)) = construct::best_construction(n, &p) else {
            continue; // pattern too tall for this n
        };
        let lower = levels.size();
        let (upper, certified) = if is_path {
            (Some(chains::formula_pk(n, p.vertex_count() as u32)?.value), true)
        } else {
            match chains::tree_upper_estimate(n, info.height as u32, p.vertex_count() as u32) {
                Ok(est) => (Some(est), false),
                Err(_) => (None, false),
            }
        };
        rows.push(json!({
            "n": n,
            "lower": lower.to_string(),
            "lower_ratio": ratio_to_pow2(&lower, n),
            "upper": upper.as_ref().map(|u| u.to_string()),
            "upper_ratio": upper.as_ref().map(|u| ratio_to_pow2(u, n)),
            "upper_certified": certified,
        }));
    }
    let h = info.height as f64;
    Ok(json!({
        "pattern": pattern_summary(&p),
        "asymptote": (h - 1.0) / h,
        "rows": rows,
    }))
}

fn exact_value(pattern: &str, n: u32, node_cap: u32) -> Result<Value, Error> {
    let p = Pattern::parse(pattern)?;
    let dim = Dim::new(n)?;
    let opts = SolveOptions {
        method: SolveMethod::Auto,
        timeout_ms: None,
        node_cap: if node_cap == 0 { None } else { Some(node_cap as u64) },
    };
    let r = solver::exact_exv(dim, &p, &opts)?;
    let construction = construct::best_construction(n, &p)
        .ok()
        .map(|(_, ls)| ls.size().to_string());
    Ok(json!({
        "pattern": pattern_summary(&p),
        "n": n,
        "value": r.value,
        "exact": r.exact,
        "method": r.method,
        "nodes": r.nodes,
        "upper_bound": r.upper_bound,
        "construction_size": construction,
        "witness_levels": r.witness.level_hist(),
        "witness": r.witness.iter().map(Vertex::set_string).collect::<Vec<_>>(),
    }))
}

/// Level structure, size, freeness certificate, and (for small n) the
/// chain profile of the best construction avoiding `pattern` in Q_n.
#[wasm_bindgen]
pub fn construction_json(pattern: &str, n: u32) -> Result<String, JsError> {
    Ok(construction_value(pattern, n).map_err(err_to_js)?.to_string())
}

/// Lower/upper bound rows for n in the inclusive range, with ratios to 2^n
/// and the height asymptote.
#[wasm_bindgen]
pub fn bounds_json(pattern: &str, n_from: u32, n_to: u32) -> Result<String, JsError> {
    Ok(bounds_value(pattern, n_from, n_to).map_err(err_to_js)?.to_string())
}

/// Exact optimum for small n (brute force or branch-and-bound), with the
/// witness family. `node_cap` bounds the search on this clockless target;
/// 0 means unlimited.
#[wasm_bindgen]
pub fn exact_json(pattern: &str, n: u32, node_cap: u32) -> Result<String, JsError> {
    Ok(exact_value(pattern, n, node_cap).map_err(err_to_js)?.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_payload_shape() {
        let v = construction_value("V:2", 6).unwrap();
        assert_eq!(v["size"], "33");
        assert_eq!(v["levels"], serde_json::json!([1, 3, 5, 6]));
        assert!(v["chain_profile"].is_array());
        assert!(v["size_ratio"].as_f64().unwrap() > 0.5);
    }

    #[test]
    fn bounds_payload_shape() {
        let v = bounds_value("P:3", 3, 10).unwrap();
        assert_eq!(v["asymptote"], serde_json::json!(2.0 / 3.0));
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 8);
        assert_eq!(rows.last().unwrap()["lower"], "683");
        assert_eq!(rows.last().unwrap()["upper"], "683");
        assert_eq!(rows.last().unwrap()["upper_certified"], true);
    }

    #[test]
    fn exact_payload_shape() {
        let v = exact_value("V:2", 4, 0).unwrap();
        assert_eq!(v["value"], 9);
        assert_eq!(v["exact"], true);
        assert_eq!(v["witness"].as_array().unwrap().len(), 9);
    }

    #[test]
    fn tall_pattern_rows_are_skipped() {
        let v = bounds_value("P:4", 3, 6).unwrap();
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.first().unwrap()["n"], 4);
    }
}
