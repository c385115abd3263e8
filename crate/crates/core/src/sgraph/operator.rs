use num_traits::Zero;

use super::SGraph;
use crate::dynamics::Letter;
use crate::error::{Error, Result};
use crate::exact::{kernel_basis, kernel_dimension, to_fraction_string, Rational, RationalMatrix};
use crate::operator::CPElement;

/// Matrix of `T^g` on `C[V]`: column `v` is the image of the basis vector at
/// `v`, so entry `(w, v)` collects the coefficients carried from `v` to `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedOperator {
    pub matrix: RationalMatrix,
}

impl InducedOperator {
    pub fn kernel_dimension(&self) -> usize {
        kernel_dimension(&self.matrix)
    }

    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        kernel_basis(&self.matrix)
    }

    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        self.matrix.mul_vec(v)
    }
}

/// `T^g(ζ_v) = Σ_{e : s(e) = v} θ_{L(v)}(L(e)) ζ_{t(e)}`, with the identity
/// coefficient acting on `ζ_v` itself when no loop carries it.
pub fn induced_operator(g: &SGraph, t: &CPElement) -> Result<InducedOperator> {
    let n = g.vertex_count();
    let mut m = RationalMatrix::zeros(n, n);
    for v in 0..n {
        for (coef, gamma) in &t.term(g.label(v)).theta {
            let target = match g.out_edges(v).find(|e| e.gamma == *gamma) {
                Some(e) => e.target,
                None if gamma.is_identity() => v,
                None => {
                    return Err(Error::Condition(format!(
                        "vertex {v} has no out-edge labeled {gamma}"
                    )))
                }
            };
            m[(target, v)] += coef;
        }
    }
    Ok(InducedOperator { matrix: m })
}

/// `Σ_{e : t(e) = w} θ^S_{L(s(e))}(L(e)) v(s(e))` for every vertex `w`.
pub fn incoming_flow(g: &SGraph, s: &CPElement, v: &[Rational]) -> Result<Vec<Rational>> {
    if v.len() != g.vertex_count() {
        return Err(Error::Shape(format!(
            "vector of length {} on {} vertices",
            v.len(),
            g.vertex_count()
        )));
    }
    let mut flow = vec![Rational::zero(); v.len()];
    for e in g.edges() {
        let c = s.term(g.label(e.source)).coefficient(e.gamma);
        if !c.is_zero() {
            flow[e.target] += c * &v[e.source];
        }
    }
    Ok(flow)
}

/// Checks that `v` lies in `ker T^g` and that at every vertex the incoming
/// flow is `-v(w)`, or zero on vertices in an `I`, `F` or complement piece.
pub fn verify_flow_lemma(g: &SGraph, s: &CPElement, t: &CPElement, v: &[Rational]) -> Result<()> {
    let image = induced_operator(g, t)?.apply(v)?;
    if image.iter().any(|x| !x.is_zero()) {
        return Err(Error::NotInKernel);
    }
    let flow = incoming_flow(g, s, v)?;
    for (w, f) in flow.iter().enumerate() {
        let absorbing = matches!(g.label(w).letter(), None | Some(Letter::I) | Some(Letter::F));
        let expected = if absorbing {
            Rational::zero()
        } else {
            -v[w].clone()
        };
        if *f != expected {
            return Err(Error::Flow {
                vertex: w,
                detail: format!(
                    "incoming flow {} but expected {}",
                    to_fraction_string(f),
                    to_fraction_string(&expected)
                ),
            });
        }
    }
    Ok(())
}
