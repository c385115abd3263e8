use std::collections::VecDeque;

use super::SGraph;

/// Local invariant preserved by every label-respecting isomorphism.
fn invariant(g: &SGraph, v: usize) -> (u8, Vec<i64>, Vec<i64>) {
    let mut out: Vec<i64> = g.out_edges(v).map(|e| e.gamma.key()).collect();
    let mut inc: Vec<i64> = g.in_edges(v).map(|e| e.gamma.key()).collect();
    out.sort_unstable();
    inc.sort_unstable();
    (g.label(v).0, out, inc)
}

/// Vertex order in which each vertex after the first of its component has
/// an earlier neighbour, so candidate sets stay small.
fn search_order(g: &SGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let next = g
                .out_edges(v)
                .map(|e| e.target)
                .chain(g.in_edges(v).map(|e| e.source));
            for w in next.collect::<Vec<_>>() {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

struct Matcher<'a> {
    a: &'a SGraph,
    b: &'a SGraph,
    inv_a: Vec<(u8, Vec<i64>, Vec<i64>)>,
    inv_b: Vec<(u8, Vec<i64>, Vec<i64>)>,
    order: Vec<usize>,
    fwd: Vec<Option<usize>>,
    back: Vec<Option<usize>>,
}

impl Matcher<'_> {
    /// Edges between `v` and already-mapped vertices, translated into `b`,
    /// must coincide with the edges between `w` and their images.
    fn consistent(&self, v: usize, w: usize) -> bool {
        let mut ea: Vec<(u8, usize, i64)> = Vec::new();
        for e in self.a.out_edges(v) {
            if let Some(t) = self.fwd[e.target] {
                ea.push((0, t, e.gamma.key()));
            }
        }
        for e in self.a.in_edges(v) {
            if let Some(s) = self.fwd[e.source] {
                ea.push((1, s, e.gamma.key()));
            }
        }
        let mut eb: Vec<(u8, usize, i64)> = Vec::new();
        for e in self.b.out_edges(w) {
            if self.back[e.target].is_some() {
                eb.push((0, e.target, e.gamma.key()));
            }
        }
        for e in self.b.in_edges(w) {
            if self.back[e.source].is_some() {
                eb.push((1, e.source, e.gamma.key()));
            }
        }
        ea.sort_unstable();
        eb.sort_unstable();
        ea == eb
    }

    fn candidates(&self, v: usize) -> Vec<usize> {
        // Follow one edge to a mapped neighbour when there is one.
        for e in self.a.in_edges(v) {
            if let Some(s) = self.fwd[e.source] {
                return self
                    .b
                    .out_edges(s)
                    .filter(|f| f.gamma == e.gamma)
                    .map(|f| f.target)
                    .collect();
            }
        }
        for e in self.a.out_edges(v) {
            if let Some(t) = self.fwd[e.target] {
                return self
                    .b
                    .in_edges(t)
                    .filter(|f| f.gamma == e.gamma)
                    .map(|f| f.source)
                    .collect();
            }
        }
        (0..self.b.vertex_count()).collect()
    }

    fn search(&mut self, depth: usize, found: &mut dyn FnMut(&[Option<usize>]) -> bool) -> bool {
        if depth == self.order.len() {
            return found(&self.fwd);
        }
        let v = self.order[depth];
        let mut cands = self.candidates(v);
        cands.sort_unstable();
        cands.dedup();
        for w in cands {
            if self.back[w].is_some() || self.inv_a[v] != self.inv_b[w] {
                continue;
            }
            self.fwd[v] = Some(w);
            self.back[w] = Some(v);
            if self.consistent(v, w) && self.search(depth + 1, found) {
                return true;
            }
            self.fwd[v] = None;
            self.back[w] = None;
        }
        false
    }
}

/// Calls `found` on each label-preserving isomorphism `a -> b` until it
/// returns `true`.
fn for_each_isomorphism(a: &SGraph, b: &SGraph, found: &mut dyn FnMut(&[Option<usize>]) -> bool) {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edges().len() != b.edges().len() {
        return;
    }
    let inv_a: Vec<_> = (0..n).map(|v| invariant(a, v)).collect();
    let inv_b: Vec<_> = (0..n).map(|v| invariant(b, v)).collect();
    let (mut sa, mut sb) = (inv_a.clone(), inv_b.clone());
    sa.sort();
    sb.sort();
    if sa != sb {
        return;
    }
    let mut m = Matcher {
        a,
        b,
        inv_a,
        inv_b,
        order: search_order(a),
        fwd: vec![None; n],
        back: vec![None; n],
    };
    m.search(0, found);
}

/// A bijection `φ` with `b.label(φ(v)) = a.label(v)` carrying edges to
/// edges with the same group element, as `φ[v]`.
pub fn find_isomorphism(a: &SGraph, b: &SGraph) -> Option<Vec<usize>> {
    let mut result = None;
    for_each_isomorphism(a, b, &mut |m| {
        result = Some(m.iter().map(|x| x.expect("complete mapping")).collect());
        true
    });
    result
}

pub fn isomorphic(a: &SGraph, b: &SGraph) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Number of label-preserving automorphisms, counting stops at `limit`.
pub fn count_automorphisms(g: &SGraph, limit: usize) -> usize {
    let mut count = 0;
    for_each_isomorphism(g, g, &mut |_| {
        count += 1;
        count >= limit
    });
    count
}

pub fn has_trivial_automorphisms(g: &SGraph) -> bool {
    count_automorphisms(g, 2) == 1
}

/// Isomorphism-invariant encoding of a connected graph whose edge labels are
/// distinct at every vertex, in both directions.
pub type CanonicalCode = Vec<i64>;

/// `None` when the graph is disconnected or some vertex repeats an edge
/// label; those graphs need [`isomorphic`]. Otherwise two graphs are
/// isomorphic exactly when their codes agree.
pub fn canonical_code(g: &SGraph) -> Option<CanonicalCode> {
    let n = g.vertex_count();
    if n == 0 {
        return Some(vec![0]);
    }
    for v in 0..n {
        let (_, out, inc) = invariant(g, v);
        if out.windows(2).any(|w| w[0] == w[1]) || inc.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
    }
    let min_label = g.labels().iter().min().expect("nonempty");
    let mut best: Option<CanonicalCode> = None;
    for root in (0..n).filter(|&v| g.label(v) == *min_label) {
        // With distinct labels per direction the traversal order, and hence
        // the numbering, is forced once the root is chosen.
        let mut number = vec![usize::MAX; n];
        let mut order = vec![root];
        number[root] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let mut steps: Vec<(u8, i64, usize)> = g
                .out_edges(v)
                .map(|e| (0, e.gamma.key(), e.target))
                .chain(g.in_edges(v).map(|e| (1, e.gamma.key(), e.source)))
                .collect();
            steps.sort_unstable();
            for (_, _, w) in steps {
                if number[w] == usize::MAX {
                    number[w] = order.len();
                    order.push(w);
                }
            }
        }
        if order.len() != n {
            return None;
        }
        let mut code: CanonicalCode = vec![n as i64];
        code.extend(order.iter().map(|&v| g.label(v).0 as i64));
        let mut edges: Vec<(usize, usize, i64)> = g
            .edges()
            .iter()
            .map(|e| (number[e.source], number[e.target], e.gamma.key()))
            .collect();
        edges.sort_unstable();
        for (s, t, k) in edges {
            code.extend([s as i64, t as i64, k]);
        }
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::GammaElement;
    use crate::operator::Piece;
    use crate::sgraph::Edge;

    fn path(labels: &[u8]) -> SGraph {
        let edges = (1..labels.len())
            .map(|i| Edge {
                source: i - 1,
                target: i,
                gamma: GammaElement::t(1),
            })
            .collect();
        SGraph::new(labels.iter().map(|&l| Piece(l)).collect(), edges).unwrap()
    }

    #[test]
    fn relabeled_path_is_isomorphic() {
        let g = path(&[8, 8, 9]);
        let h = g.permuted(&[2, 0, 1]);
        assert_eq!(find_isomorphism(&g, &h), Some(vec![2, 0, 1]));
        assert_eq!(canonical_code(&g), canonical_code(&h));
    }

    #[test]
    fn different_labels_are_not_isomorphic() {
        let g = path(&[8, 8, 9]);
        let h = path(&[8, 9, 8]);
        assert!(!isomorphic(&g, &h));
        assert_ne!(canonical_code(&g), canonical_code(&h));
    }

    #[test]
    fn symmetric_graph_has_automorphism() {
        let g = SGraph::new(vec![Piece::REST, Piece::REST], vec![]).unwrap();
        assert_eq!(count_automorphisms(&g, 10), 2);
        assert!(!has_trivial_automorphisms(&g));
        assert!(has_trivial_automorphisms(&path(&[8, 8, 9])));
    }
}
