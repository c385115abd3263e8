use std::collections::{HashSet, VecDeque};

use super::SGraph;
use crate::dynamics::{Conventions, GammaElement};
use crate::error::{Error, Result};
use crate::operator::CPElement;

/// Out-edge labels pairwise distinct at every vertex, every group element in
/// the support of the vertex's piece present as an out-edge, and, when the
/// graph is embedded, `φ(target) = φ(source)·γ` with `φ` injective and each
/// cylinder inside its vertex's piece.
pub fn check_conditions(g: &SGraph, s: &CPElement, conv: &Conventions) -> Result<()> {
    for v in 0..g.vertex_count() {
        let mut seen = HashSet::new();
        for e in g.out_edges(v) {
            if !seen.insert(e.gamma) {
                return Err(Error::Condition(format!(
                    "vertex {v} has two out-edges labeled {}",
                    e.gamma
                )));
            }
        }
        for gamma in s.term(g.label(v)).support() {
            if !seen.contains(&gamma) {
                return Err(Error::Condition(format!(
                    "vertex {v} in piece {} lacks an out-edge labeled {gamma}",
                    g.label(v)
                )));
            }
        }
    }

    if let Some(emb) = g.embedding() {
        for e in g.edges() {
            if emb[e.target] != emb[e.source].act(e.gamma, &conv.labels) {
                return Err(Error::Condition(format!(
                    "embedding of edge {} -> {} does not follow {}",
                    e.source, e.target, e.gamma
                )));
            }
        }
        for (v, c) in emb.iter().enumerate() {
            if let Some(piece) = s.cylinder(g.label(v)) {
                if !c.is_subset(piece) {
                    return Err(Error::Condition(format!(
                        "vertex {v} embedded at {c} outside piece {}",
                        g.label(v)
                    )));
                }
            }
            for (w, d) in emb.iter().enumerate().skip(v + 1) {
                if c == d {
                    return Err(Error::Condition(format!("vertices {v} and {w} share {c}")));
                }
            }
        }
    }
    Ok(())
}

/// Label of a spanning-tree path from vertex 0 to every vertex, with edges
/// traversed backwards contributing inverses. Errors on disconnected input.
pub fn path_labels(g: &SGraph) -> Result<Vec<GammaElement>> {
    let n = g.vertex_count();
    let mut labels: Vec<Option<GammaElement>> = vec![None; n];
    if n == 0 {
        return Ok(Vec::new());
    }
    labels[0] = Some(GammaElement::IDENTITY);
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        let here = labels[v].expect("queued vertices are labeled");
        for e in g.out_edges(v) {
            if labels[e.target].is_none() {
                labels[e.target] = Some(here.mul(e.gamma));
                queue.push_back(e.target);
            }
        }
        for e in g.in_edges(v) {
            if labels[e.source].is_none() {
                labels[e.source] = Some(here.mul(e.gamma.inverse()));
                queue.push_back(e.source);
            }
        }
    }
    labels
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or(Error::Disconnected)
}

/// Every closed path has trivial label. Checking the non-tree edges against
/// the spanning-tree labels suffices because closed paths decompose over
/// the cycle basis they generate.
pub fn is_simply_connected(g: &SGraph) -> Result<bool> {
    let labels = path_labels(g)?;
    Ok(g.edges()
        .iter()
        .all(|e| labels[e.source].mul(e.gamma) == labels[e.target]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Piece;
    use crate::sgraph::Edge;

    #[test]
    fn parallel_shift_edges_are_not_simply_connected() {
        let g = SGraph::new(
            vec![Piece(8), Piece(8)],
            vec![
                Edge {
                    source: 0,
                    target: 1,
                    gamma: GammaElement::t(1),
                },
                Edge {
                    source: 0,
                    target: 1,
                    gamma: GammaElement::t(2),
                },
            ],
        )
        .unwrap();
        assert!(!is_simply_connected(&g).unwrap());
    }

    #[test]
    fn disconnected_rejected() {
        let g = SGraph::new(vec![Piece::REST, Piece::REST], vec![]).unwrap();
        assert!(matches!(is_simply_connected(&g), Err(Error::Disconnected)));
    }

    #[test]
    fn single_rest_vertex_satisfies_conditions() {
        let conv = Conventions::canonical();
        let s = crate::operator::build_s(&conv);
        let g = SGraph::new(vec![Piece::REST], vec![]).unwrap();
        assert!(check_conditions(&g, &s, &conv).is_ok());
        assert!(is_simply_connected(&g).unwrap());
    }

    #[test]
    fn missing_support_edge_detected() {
        let conv = Conventions::canonical();
        let s = crate::operator::build_s(&conv);
        let g = SGraph::new(vec![Piece(8)], vec![]).unwrap();
        assert!(check_conditions(&g, &s, &conv).is_err());
    }
}
