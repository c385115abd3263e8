//! Browser bindings for `lampdim`. Every entry point returns a JSON string.
//! The `*_report` functions hold the logic and run natively as well.

use std::collections::VecDeque;

use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

use lampdim::decomposer::{monte_carlo, MonteCarloConfig, TemplateCache, DEFAULT_CAP};
use lampdim::dimension::cross_check;
use lampdim::dynamics::Conventions;
use lampdim::exact::{to_decimal, to_fraction_string};
use lampdim::families::{mu_closed_form, FamilyId};
use lampdim::sgraph::{induced_operator, SGraph};

pub const MAX_P: u32 = 50;
pub const MAX_KMAX: u32 = 40;
pub const MAX_DIGITS: u32 = 60;
pub const MAX_INDEX: u32 = 12;
pub const MAX_SAMPLES: u32 = 50_000;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn check_p(p: u32) -> Result<(), String> {
    check((2..=MAX_P).contains(&p), || format!("p must lie in 2..={MAX_P}"))
}

pub fn dimension_report(p: u32, kmax: u32, digits: u32) -> Result<String, String> {
    check_p(p)?;
    check((1..=MAX_KMAX).contains(&kmax), || {
        format!("kmax must lie in 1..={MAX_KMAX}")
    })?;
    check((1..=MAX_DIGITS).contains(&digits), || {
        format!("digits must lie in 1..={MAX_DIGITS}")
    })?;
    let c = cross_check(p, kmax, digits as usize).map_err(|e| e.to_string())?;
    let side = |d: &lampdim::dimension::DimensionResult| {
        json!({
            "decimal": d.decimal(),
            "certified_digits": d.certified_digits(),
            "head": to_fraction_string(&d.head),
            "width": to_decimal(&d.enclosure.width(), digits as usize + 10),
            "lacunary_terms": d.lacunary_terms,
        })
    };
    Ok(json!({
        "p": p,
        "kmax": kmax,
        "graph_sum": side(&c.graph_sum),
        "closed_form": side(&c.closed_form),
        "intersect": c.intersect,
        "defect": c.defect,
        "defect_explained": c.defect_explained,
    })
    .to_string())
}

#[derive(Serialize)]
struct VertexView {
    id: usize,
    letter: String,
    piece: u8,
    depth: usize,
}

#[derive(Serialize)]
struct EdgeView {
    source: usize,
    target: usize,
    label: String,
}

/// Breadth-first depth of every vertex from vertex 0, ignoring direction.
fn depths(g: &SGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut depth = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    if n > 0 {
        depth[0] = 0;
        queue.push_back(0);
    }
    while let Some(v) = queue.pop_front() {
        let next = g
            .out_edges(v)
            .map(|e| e.target)
            .chain(g.in_edges(v).map(|e| e.source));
        for w in next.collect::<Vec<_>>() {
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                queue.push_back(w);
            }
        }
    }
    depth
}

pub fn family_graph_report(kind: &str, k: u32, l: u32, p: u32) -> Result<String, String> {
    check_p(p)?;
    check(k <= MAX_INDEX && l <= MAX_INDEX, || {
        format!("indices must be at most {MAX_INDEX}")
    })?;
    let id = match kind {
        "u" => FamilyId::U,
        "g" => FamilyId::G(k),
        "h" => FamilyId::H(l),
        "j" => FamilyId::J(k, l),
        _ => return Err(format!("unknown family kind {kind:?}")),
    };
    id.validate().map_err(|e| e.to_string())?;
    let cache = TemplateCache::new(Conventions::canonical());
    let template = cache.get(id).map_err(|e| e.to_string())?;
    let g = &template.graph;
    let basis = induced_operator(g, cache.t())
        .map_err(|e| e.to_string())?
        .kernel_basis();
    let depth = depths(g);
    let vertices: Vec<VertexView> = (0..g.vertex_count())
        .map(|v| {
            let piece = g.label(v);
            VertexView {
                id: v,
                letter: piece.letter().map_or("U".into(), |x| x.to_string()),
                piece: piece.0,
                depth: depth[v],
            }
        })
        .collect();
    let edges: Vec<EdgeView> = g
        .edges()
        .iter()
        .map(|e| EdgeView {
            source: e.source,
            target: e.target,
            label: e.gamma.to_string(),
        })
        .collect();
    let mu = mu_closed_form(id, p).ok_or("no closed form")?;
    Ok(json!({
        "family": id,
        "vertices": vertices,
        "edges": edges,
        "kernel_dim": template.kernel_dim,
        "kernel_basis": basis
            .iter()
            .map(|v| v.iter().map(to_fraction_string).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "p": p,
        "mu": to_fraction_string(&mu),
        "mu_decimal": to_decimal(&mu, 12),
    })
    .to_string())
}

pub fn sample_census_report(p: u32, n: u32, seed: u32) -> Result<String, String> {
    check_p(p)?;
    check((1..=MAX_SAMPLES).contains(&n), || {
        format!("samples must lie in 1..={MAX_SAMPLES}")
    })?;
    let cache = TemplateCache::new(Conventions::canonical());
    let cfg = MonteCarloConfig {
        p,
        samples: n as u64,
        seed: seed as u64,
        cap: DEFAULT_CAP,
        check_hypotheses: true,
        workers: None,
    };
    let report = monte_carlo(&cfg, &cache).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// Graph-sum and closed-form enclosures of the kernel dimension.
#[wasm_bindgen]
pub fn dimension(p: u32, kmax: u32, digits: u32) -> Result<String, JsValue> {
    js(dimension_report(p, kmax, digits))
}

/// Template graph of a family (`kind` is `u`, `g`, `h` or `j`) with its
/// kernel basis and measure at `p`.
#[wasm_bindgen]
pub fn family_graph(kind: &str, k: u32, l: u32, p: u32) -> Result<String, JsValue> {
    js(family_graph_report(kind, k, l, p))
}

/// Monte Carlo family frequencies for `n` random points.
#[wasm_bindgen]
pub fn sample_census(p: u32, n: u32, seed: u32) -> Result<String, JsValue> {
    js(sample_census_report(p, n, seed))
}
