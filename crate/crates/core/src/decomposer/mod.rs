//! Maximal embedded S-graphs through a point, their classification into
//! families, and Monte Carlo estimation of the family distribution.

mod classify;
mod monte_carlo;

pub use crate::families::FamilyId;
pub use classify::{classify, Template, TemplateCache};
pub use monte_carlo::{
    monte_carlo, sample_outcome, sample_point, ClassRow, FrequencyReport, MonteCarloConfig, SampleOutcome,
};

use std::collections::{HashMap, VecDeque};

use crate::dynamics::{GammaElement, LazyPoint, Vec3};
use crate::error::{Error, Result};
use crate::operator::{CPElement, Piece};
use crate::sgraph::{Edge, SGraph};

pub const DEFAULT_CAP: usize = 10_000;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Traversal {
    BreadthFirst,
    DepthFirst,
}

/// The graph together with the point behind each vertex; vertex 0 is the
/// starting point.
#[derive(Clone, Debug)]
pub struct Closure {
    pub graph: SGraph,
    pub points: Vec<LazyPoint>,
}

impl Closure {
    pub fn keys(&self) -> Vec<(i64, Vec3)> {
        self.points.iter().map(LazyPoint::key).collect()
    }
}

pub fn closure_from_point(x: &LazyPoint, s: &CPElement, cap: usize) -> Result<Closure> {
    closure_with_order(x, s, cap, Traversal::BreadthFirst)
}

/// Closes `{x}` under `y -> y·γ` for `γ` in the support at `y`'s piece and
/// under the reverse step: `z` joins whenever `z` lies in a piece `j` and
/// `z·γ` is already a vertex for some `γ` in the support at `j`.
pub fn closure_with_order(x: &LazyPoint, s: &CPElement, cap: usize, order: Traversal) -> Result<Closure> {
    if cap == 0 {
        return Err(Error::Domain("cap must be at least 1".into()));
    }
    let reverse: Vec<(Piece, GammaElement)> = s
        .support_pairs()
        .into_iter()
        .map(|(j, g)| (j, g.inverse()))
        .collect();

    let mut index: HashMap<(i64, Vec3), usize> = HashMap::new();
    let mut points = vec![x.clone()];
    let mut pieces = vec![s.piece_of(x)];
    index.insert(x.key(), 0);
    let mut edges = Vec::new();
    let mut pending = VecDeque::from([0usize]);

    let mut intern = |y: LazyPoint,
                      piece: Piece,
                      points: &mut Vec<LazyPoint>,
                      pieces: &mut Vec<Piece>,
                      pending: &mut VecDeque<usize>|
     -> Result<usize> {
        if let Some(&i) = index.get(&y.key()) {
            return Ok(i);
        }
        let i = points.len();
        if i >= cap {
            return Err(Error::CapExceeded { cap });
        }
        index.insert(y.key(), i);
        points.push(y);
        pieces.push(piece);
        pending.push_back(i);
        Ok(i)
    };

    loop {
        let next = match order {
            Traversal::BreadthFirst => pending.pop_front(),
            Traversal::DepthFirst => pending.pop_back(),
        };
        let Some(v) = next else { break };
        let y = points[v].clone();
        let piece = pieces[v];
        for gamma in s.term(piece).support() {
            let w = y.act(gamma);
            let wp = s.piece_of(&w);
            let target = intern(w, wp, &mut points, &mut pieces, &mut pending)?;
            edges.push(Edge {
                source: v,
                target,
                gamma,
            });
        }
        for &(j, inv) in &reverse {
            let z = y.act(inv);
            if s.piece_of(&z) == j {
                intern(z, j, &mut points, &mut pieces, &mut pending)?;
            }
        }
    }

    edges.sort_by_key(|e| (e.source, e.gamma));
    Ok(Closure {
        graph: SGraph::new(pieces, edges)?,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Conventions, Letter};
    use crate::operator::build_s;

    #[test]
    fn u1_point_is_isolated() {
        let conv = Conventions::canonical();
        let s = build_s(&conv);
        for seed in 0..20 {
            let x = LazyPoint::random(3, seed, conv.labels.vector(Letter::U1));
            let c = closure_from_point(&x, &s, DEFAULT_CAP).unwrap();
            assert_eq!(c.graph.vertex_count(), 1);
            assert_eq!(c.graph.label(0), Piece::REST);
        }
    }

    #[test]
    fn traversal_order_does_not_change_vertex_set() {
        let conv = Conventions::canonical();
        let s = build_s(&conv);
        for seed in 0..200 {
            let letter = Letter::ALL[(seed % 8) as usize];
            let x = LazyPoint::random(2, seed, conv.labels.vector(letter));
            let a = closure_with_order(&x, &s, DEFAULT_CAP, Traversal::BreadthFirst).unwrap();
            let b = closure_with_order(&x, &s, DEFAULT_CAP, Traversal::DepthFirst).unwrap();
            let mut ka = a.keys();
            let mut kb = b.keys();
            ka.sort();
            kb.sort();
            assert_eq!(ka, kb);
            assert_eq!(a.graph.edges().len(), b.graph.edges().len());
        }
    }

    #[test]
    fn tiny_cap_is_reported() {
        let conv = Conventions::canonical();
        let s = build_s(&conv);
        let x = crate::families::seed_point(FamilyId::G(3), &conv, 2).unwrap();
        assert!(matches!(
            closure_from_point(&x, &s, 2),
            Err(Error::CapExceeded { cap: 2 })
        ));
    }
}
