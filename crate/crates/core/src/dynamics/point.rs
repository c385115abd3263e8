use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::f2::Vec3;
use super::gamma::GammaElement;

/// How coordinates outside the fixed set are produced.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Fill {
    /// Uniform on `Z/p`, a pure function of `(seed, position)`.
    Random { seed: u64 },
    /// Every free coordinate takes this value.
    Constant(u32),
}

/// Backing sequence in `(Z/p)^Z`, materialized on demand.
#[derive(Debug)]
pub struct CoordinateSource {
    p: u32,
    fill: Fill,
    fixed: HashMap<i64, u32>,
    cache: RefCell<HashMap<i64, u32>>,
}

impl CoordinateSource {
    pub fn new(p: u32, fill: Fill, fixed: HashMap<i64, u32>) -> Self {
        assert!(p >= 2, "p must be at least 2");
        assert!(fixed.values().all(|&v| v < p));
        if let Fill::Constant(v) = fill {
            assert!(v < p);
        }
        CoordinateSource {
            p,
            fill,
            fixed,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn value(&self, position: i64) -> u32 {
        if let Some(&v) = self.fixed.get(&position) {
            return v;
        }
        *self
            .cache
            .borrow_mut()
            .entry(position)
            .or_insert_with(|| match self.fill {
                Fill::Constant(v) => v,
                Fill::Random { seed } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(position as u64);
                    rng.gen_range(0..self.p)
                }
            })
    }

    /// Positions materialized so far, fixed ones included.
    pub fn touched(&self) -> usize {
        self.fixed.len() + self.cache.borrow().len()
    }
}

/// A point `((m_i), y)` of `X` read through a shared lazy sequence: the
/// coordinate at `j` is the source's value at `j + offset`.
#[derive(Clone, Debug)]
pub struct LazyPoint {
    source: Rc<CoordinateSource>,
    offset: i64,
    label: Vec3,
}

impl LazyPoint {
    pub fn new(source: Rc<CoordinateSource>, label: Vec3) -> Self {
        LazyPoint {
            source,
            offset: 0,
            label,
        }
    }

    pub fn random(p: u32, seed: u64, label: Vec3) -> Self {
        Self::new(
            Rc::new(CoordinateSource::new(p, Fill::Random { seed }, HashMap::new())),
            label,
        )
    }

    pub fn p(&self) -> u32 {
        self.source.p()
    }

    pub fn coordinate(&self, j: i64) -> u32 {
        self.source.value(j + self.offset)
    }

    pub fn label(&self) -> Vec3 {
        self.label
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn source(&self) -> &Rc<CoordinateSource> {
        &self.source
    }

    /// Right action: coordinate `j` of the image is coordinate `j + shift`
    /// of `self`; the label is multiplied by the matrix part.
    pub fn act(&self, g: GammaElement) -> LazyPoint {
        LazyPoint {
            source: Rc::clone(&self.source),
            offset: self.offset + g.shift,
            label: g.mat.apply(self.label),
        }
    }

    /// Identity key within one source. Distinct offsets are treated as
    /// distinct points, which fails only for periodic sequences.
    pub fn key(&self) -> (i64, Vec3) {
        (self.offset, self.label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Automorphism;

    #[test]
    fn identity_and_inverse_shifts() {
        let x = LazyPoint::random(5, 42, Vec3::new(3).unwrap());
        let y = x.act(GammaElement::IDENTITY);
        assert_eq!(x.key(), y.key());
        let z = x.act(GammaElement::t(-1)).act(GammaElement::t(1));
        for j in -10..10 {
            assert_eq!(x.coordinate(j), z.coordinate(j));
        }
    }

    #[test]
    fn shifted_view_reads_next_coordinate() {
        let x = LazyPoint::random(7, 1, Vec3::ZERO);
        let tx = x.act(GammaElement::t(1));
        for j in -5..5 {
            assert_eq!(tx.coordinate(j), x.coordinate(j + 1));
        }
    }

    #[test]
    fn coordinates_independent_of_access_order() {
        let a = LazyPoint::random(3, 9, Vec3::ZERO);
        let b = LazyPoint::random(3, 9, Vec3::ZERO);
        let forward: Vec<u32> = (-20..20).map(|j| a.coordinate(j)).collect();
        let backward: Vec<u32> = (-20..20).rev().map(|j| b.coordinate(j)).collect();
        assert!(forward.iter().eq(backward.iter().rev()));
        assert!(forward.iter().all(|&v| v < 3));
    }

    #[test]
    fn matrix_part_moves_label() {
        let m = Automorphism::all()[5];
        let x = LazyPoint::random(2, 0, Vec3::new(6).unwrap());
        assert_eq!(x.act(GammaElement::mat(m)).label(), m.apply(x.label()));
    }
}
