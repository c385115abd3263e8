//! S-graphs: finite directed graphs whose vertices carry partition pieces
//! and whose edges carry group elements, with the structural checks and the
//! finite-dimensional operator they induce.

mod iso;
mod operator;
mod structure;

pub use iso::{
    canonical_code, count_automorphisms, find_isomorphism, has_trivial_automorphisms, isomorphic,
    CanonicalCode,
};
pub use operator::{incoming_flow, induced_operator, verify_flow_lemma, InducedOperator};
pub use structure::{check_conditions, is_simply_connected, path_labels};

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dynamics::{CylinderRecord, CylinderSet, GammaElement};
use crate::error::{Error, Result};
use crate::operator::Piece;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub gamma: GammaElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SGraph {
    labels: Vec<Piece>,
    edges: Vec<Edge>,
    embedding: Option<Vec<CylinderSet>>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl SGraph {
    pub fn new(labels: Vec<Piece>, edges: Vec<Edge>) -> Result<Self> {
        let n = labels.len();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if e.source >= n || e.target >= n {
                return Err(Error::Format(format!("edge {i} leaves the vertex range")));
            }
            out[e.source].push(i);
            inc[e.target].push(i);
        }
        Ok(SGraph {
            labels,
            edges,
            embedding: None,
            out,
            inc,
        })
    }

    pub fn with_embedding(mut self, embedding: Vec<CylinderSet>) -> Result<Self> {
        if embedding.len() != self.labels.len() {
            return Err(Error::Shape(format!(
                "{} cylinders for {} vertices",
                embedding.len(),
                self.labels.len()
            )));
        }
        self.embedding = Some(embedding);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Piece] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> Piece {
        self.labels[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.out[v].iter().map(|&i| &self.edges[i])
    }

    pub fn in_edges(&self, v: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.inc[v].iter().map(|&i| &self.edges[i])
    }

    pub fn embedding(&self) -> Option<&[CylinderSet]> {
        self.embedding.as_deref()
    }

    /// Copy with one edge removed.
    pub fn without_edge(&self, index: usize) -> SGraph {
        let mut edges = self.edges.clone();
        edges.remove(index);
        let g = SGraph::new(self.labels.clone(), edges).expect("indices unchanged");
        match &self.embedding {
            Some(emb) => g.with_embedding(emb.clone()).expect("same vertex count"),
            None => g,
        }
    }

    /// Relabels vertices: vertex `v` of `self` becomes vertex `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> SGraph {
        let n = self.vertex_count();
        let mut labels = vec![Piece::REST; n];
        for v in 0..n {
            labels[perm[v]] = self.labels[v];
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                source: perm[e.source],
                target: perm[e.target],
                gamma: e.gamma,
            })
            .collect();
        let g = SGraph::new(labels, edges).expect("permutation keeps indices in range");
        match &self.embedding {
            Some(emb) => {
                let mut moved = emb.clone();
                for v in 0..n {
                    moved[perm[v]] = emb[v].clone();
                }
                g.with_embedding(moved).expect("same vertex count")
            }
            None => g,
        }
    }

    /// Number of vertices per piece, indexed `0..15`.
    pub fn piece_census(&self) -> [usize; 15] {
        let mut counts = [0; 15];
        for l in &self.labels {
            counts[l.index()] += 1;
        }
        counts
    }

    /// Graphviz rendering.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{name}\" {{\n");
        for (v, l) in self.labels.iter().enumerate() {
            let letter = l.letter().map_or("U".to_string(), |x| x.to_string());
            let extra = self
                .embedding
                .as_ref()
                .map_or(String::new(), |e| format!("\\n{}", e[v]));
            let _ = writeln!(s, "  v{v} [label=\"{v}: {letter}{l}{extra}\"];");
        }
        for e in &self.edges {
            let _ = writeln!(s, "  v{} -> v{} [label=\"{}\"];", e.source, e.target, e.gamma);
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct VertexRecord {
    id: usize,
    piece: Piece,
    letter: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct GraphRecord {
    vertices: Vec<VertexRecord>,
    edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    embedding: Option<Vec<CylinderRecord>>,
}

impl Serialize for SGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRecord {
            vertices: self
                .labels
                .iter()
                .enumerate()
                .map(|(id, piece)| VertexRecord {
                    id,
                    piece: *piece,
                    letter: piece.letter().map_or("U".into(), |l| l.to_string()),
                })
                .collect(),
            edges: self.edges.clone(),
            embedding: self
                .embedding
                .as_ref()
                .map(|e| e.iter().map(Into::into).collect()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = GraphRecord::deserialize(d)?;
        let mut labels = vec![Piece::REST; r.vertices.len()];
        for v in &r.vertices {
            *labels
                .get_mut(v.id)
                .ok_or_else(|| D::Error::custom(format!("vertex id {} out of range", v.id)))? = v.piece;
        }
        let g = SGraph::new(labels, r.edges).map_err(D::Error::custom)?;
        match r.embedding {
            Some(emb) => {
                let cyl = emb
                    .into_iter()
                    .map(CylinderSet::try_from)
                    .collect::<Result<Vec<_>>>()
                    .map_err(D::Error::custom)?;
                g.with_embedding(cyl).map_err(D::Error::custom)
            }
            None => Ok(g),
        }
    }
}
