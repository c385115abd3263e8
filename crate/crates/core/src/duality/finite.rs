//! Group algebras of small finite groups, their regular representations and
//! the scaling identity `|H| · dim ker((1-π) + πθ) = dim ker θ`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Automorphism, Vec3};
use crate::error::{Error, Result};
use crate::exact::{int, kernel_dimension, rat, to_fraction_string, Rational, RationalMatrix};

/// A finite group with elements numbered `0..order`.
pub trait FiniteGroup {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;

    fn inverse(&self, a: usize) -> usize {
        (0..self.order())
            .find(|&b| self.mul(a, b) == self.identity())
            .expect("group elements are invertible")
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Cyclic(pub usize);

impl FiniteGroup for Cyclic {
    fn order(&self) -> usize {
        self.0
    }

    fn identity(&self) -> usize {
        0
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        (a + b) % self.0
    }

    fn inverse(&self, a: usize) -> usize {
        (self.0 - a) % self.0
    }
}

/// `(Z/2)^3 ⋊ GL_3(Z/2)`, the affine maps `x -> x·M + v`; element
/// `v·168 + i` is `(v, M_i)` with `M_i` the `i`-th matrix in bit order.
#[derive(Clone, Debug)]
pub struct AffineF2 {
    index: Vec<u16>,
}

impl AffineF2 {
    pub fn new() -> Self {
        let mut index = vec![u16::MAX; 512];
        for (i, m) in Automorphism::all().iter().enumerate() {
            index[m.bits() as usize] = i as u16;
        }
        AffineF2 { index }
    }

    pub fn element(&self, v: Vec3, m: Automorphism) -> usize {
        v.bits() as usize * 168 + self.index[m.bits() as usize] as usize
    }

    pub fn parts(&self, a: usize) -> (Vec3, Automorphism) {
        let v = Vec3::new((a / 168) as u8).expect("index below 1344");
        (v, Automorphism::all()[a % 168])
    }
}

impl Default for AffineF2 {
    fn default() -> Self {
        Self::new()
    }
}

impl FiniteGroup for AffineF2 {
    fn order(&self) -> usize {
        1344
    }

    fn identity(&self) -> usize {
        self.element(Vec3::ZERO, Automorphism::IDENTITY)
    }

    /// `a` then `b`: `x -> (x M_a + v_a) M_b + v_b`.
    fn mul(&self, a: usize, b: usize) -> usize {
        let (va, ma) = self.parts(a);
        let (vb, mb) = self.parts(b);
        self.element(mb.apply(va).add(vb), ma.compose(mb))
    }

    fn inverse(&self, a: usize) -> usize {
        let (v, m) = self.parts(a);
        let mi = m.inverse();
        self.element(mi.apply(v), mi)
    }
}

/// Direct product; `(a, b)` is numbered `a·|B| + b`.
#[derive(Clone, Debug)]
pub struct Product<A, B>(pub A, pub B);

impl<A: FiniteGroup, B: FiniteGroup> Product<A, B> {
    pub fn pair(&self, a: usize, b: usize) -> usize {
        a * self.1.order() + b
    }
}

impl<A: FiniteGroup, B: FiniteGroup> FiniteGroup for Product<A, B> {
    fn order(&self) -> usize {
        self.0.order() * self.1.order()
    }

    fn identity(&self) -> usize {
        self.pair(self.0.identity(), self.1.identity())
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        let n = self.1.order();
        self.pair(self.0.mul(x / n, y / n), self.1.mul(x % n, y % n))
    }

    fn inverse(&self, x: usize) -> usize {
        let n = self.1.order();
        self.pair(self.0.inverse(x / n), self.1.inverse(x % n))
    }
}

/// Element of the rational group algebra, by group element index.
pub type GroupAlgebraElement = BTreeMap<usize, Rational>;

pub fn algebra_mul<G: FiniteGroup + ?Sized>(
    g: &G,
    a: &GroupAlgebraElement,
    b: &GroupAlgebraElement,
) -> GroupAlgebraElement {
    let mut out = GroupAlgebraElement::new();
    for (x, cx) in a {
        for (y, cy) in b {
            *out.entry(g.mul(*x, *y)).or_insert_with(Rational::zero) += cx * cy;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Left-regular representation as a sparse matrix: column `h` holds
/// `Σ_g θ(g) e_{gh}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularEmbedding {
    pub size: usize,
    pub columns: Vec<Vec<(usize, Rational)>>,
}

impl RegularEmbedding {
    pub fn trace(&self) -> Rational {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(h, col)| col.iter().filter(move |(row, _)| *row == h))
            .fold(Rational::zero(), |acc, (_, c)| acc + c)
    }

    pub fn to_dense(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.size, self.size);
        for (h, col) in self.columns.iter().enumerate() {
            for (row, c) in col {
                m[(*row, h)] += c;
            }
        }
        m
    }
}

pub fn regular_embedding<G: FiniteGroup + ?Sized>(g: &G, theta: &GroupAlgebraElement) -> RegularEmbedding {
    let n = g.order();
    let columns = (0..n)
        .map(|h| theta.iter().map(|(x, c)| (g.mul(*x, h), c.clone())).collect())
        .collect();
    RegularEmbedding { size: n, columns }
}

/// `tr_G(θ)`, the coefficient of the identity.
pub fn group_trace<G: FiniteGroup + ?Sized>(g: &G, theta: &GroupAlgebraElement) -> Rational {
    theta.get(&g.identity()).cloned().unwrap_or_else(Rational::zero)
}

/// `dim ker ι(θ) / |G|`.
pub fn von_neumann_kernel_dim<G: FiniteGroup + ?Sized>(g: &G, theta: &GroupAlgebraElement) -> Rational {
    let dense = regular_embedding(g, theta).to_dense();
    rat(kernel_dimension(&dense) as i64, g.order() as i64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingCheck {
    pub n: usize,
    /// `|H| · dim_vN ker((1-π) + πθ)` over `Z/n x Z/2`.
    pub lhs: String,
    /// `dim_vN ker θ` over `Z/n`.
    pub rhs: String,
    pub holds: bool,
}

/// Compares both sides for `G = Z/n`, `H = Z/2`, `π = (e + h)/2`.
pub fn scaling_lemma_check(n: usize, theta: &GroupAlgebraElement) -> Result<ScalingCheck> {
    if n == 0 || theta.keys().any(|&g| g >= n) {
        return Err(Error::Domain(format!("element outside Z/{n}")));
    }
    let g = Cyclic(n);
    let gh = Product(Cyclic(n), Cyclic(2));
    let half = rat(1, 2);
    let mut lifted = GroupAlgebraElement::new();
    // (1 - π) = (e - h)/2 and πθ = Σ θ(x) ((x, e) + (x, h))/2.
    lifted.insert(gh.pair(0, 0), half.clone());
    lifted.insert(gh.pair(0, 1), -half.clone());
    for (x, c) in theta {
        for t in 0..2 {
            *lifted.entry(gh.pair(*x, t)).or_insert_with(Rational::zero) += c * &half;
        }
    }
    lifted.retain(|_, c| !c.is_zero());
    let lhs = int(2) * von_neumann_kernel_dim(&gh, &lifted);
    let rhs = von_neumann_kernel_dim(&g, theta);
    Ok(ScalingCheck {
        n,
        holds: lhs == rhs,
        lhs: to_fraction_string(&lhs),
        rhs: to_fraction_string(&rhs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_group_axioms() {
        let g = AffineF2::new();
        let e = g.identity();
        for a in (0..1344).step_by(37) {
            assert_eq!(g.mul(a, e), a);
            assert_eq!(g.mul(e, a), a);
            assert_eq!(g.mul(a, g.inverse(a)), e);
            for b in (0..1344).step_by(101) {
                for c in (0..1344).step_by(211) {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn identity_embeds_as_identity() {
        let g = AffineF2::new();
        let one = GroupAlgebraElement::from([(g.identity(), int(1))]);
        let m = regular_embedding(&g, &one);
        assert_eq!(m.trace(), int(1344));
        let other = GroupAlgebraElement::from([(5, int(1))]);
        assert_eq!(regular_embedding(&g, &other).trace(), int(0));
    }

    #[test]
    fn embedding_is_multiplicative() {
        let g = Product(Cyclic(3), Cyclic(2));
        let a = GroupAlgebraElement::from([(1, int(2)), (4, rat(1, 3))]);
        let b = GroupAlgebraElement::from([(0, int(1)), (5, int(-1))]);
        let lhs = regular_embedding(&g, &algebra_mul(&g, &a, &b)).to_dense();
        let rhs = regular_embedding(&g, &a)
            .to_dense()
            .mul(&regular_embedding(&g, &b).to_dense())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn scaling_examples() {
        let zero = GroupAlgebraElement::new();
        let r = scaling_lemma_check(1, &zero).unwrap();
        assert!(r.holds);
        assert_eq!(r.rhs, "1");

        let theta = GroupAlgebraElement::from([(0, int(1)), (1, int(-1))]);
        let r = scaling_lemma_check(4, &theta).unwrap();
        assert!(r.holds);
        assert_eq!(r.rhs, "1/4");
    }
}
