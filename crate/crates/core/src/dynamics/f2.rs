//! Vectors and invertible matrices over the two-element field.
//!
//! Vectors are rows; a matrix acts on the right, `v -> v·M`, so that
//! `(v·M)·N = v·(MN)` and products read in the order maps are applied.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

/// Element of `(Z/2)^3`, bit `i` is coordinate `i`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vec3(u8);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3(0);

    pub fn new(bits: u8) -> Option<Vec3> {
        (bits < 8).then_some(Vec3(bits))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Standard pairing `sum x_i y_i mod 2`.
    pub fn dot(self, other: Vec3) -> bool {
        (self.0 & other.0).count_ones() % 2 == 1
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Vec3) -> Vec3 {
        Vec3(self.0 ^ other.0)
    }

    pub fn all() -> impl Iterator<Item = Vec3> {
        (0..8).map(Vec3)
    }
}

impl fmt::Debug for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:03b}", self.0)
    }
}

/// Invertible 3x3 matrix over `Z/2`, stored as three row vectors.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    rows: [u8; 3],
}

fn independent(rows: [u8; 3]) -> bool {
    let [a, b, c] = rows;
    a != 0 && b != 0 && a != b && c != 0 && c != a && c != b && c != a ^ b
}

fn apply_rows(rows: [u8; 3], v: u8) -> u8 {
    (0..3).filter(|i| v >> i & 1 == 1).fold(0, |acc, i| acc ^ rows[i])
}

struct Tables {
    all: Vec<Automorphism>,
    inverse: [u16; 512],
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let all: Vec<Automorphism> = (0u16..512).filter_map(Automorphism::from_bits).collect();
        let mut inverse = [0u16; 512];
        for m in &all {
            let inv = all
                .iter()
                .find(|n| m.compose(**n) == Automorphism::IDENTITY)
                .expect("every element of GL_3(Z/2) has an inverse");
            inverse[m.bits() as usize] = inv.bits();
        }
        Tables { all, inverse }
    })
}

impl Automorphism {
    pub const IDENTITY: Automorphism = Automorphism { rows: [1, 2, 4] };

    /// Nine-bit encoding: row `i` occupies bits `3i..3i+3`.
    pub fn from_bits(bits: u16) -> Option<Automorphism> {
        if bits >= 512 {
            return None;
        }
        let rows = [(bits & 7) as u8, (bits >> 3 & 7) as u8, (bits >> 6 & 7) as u8];
        independent(rows).then_some(Automorphism { rows })
    }

    pub fn bits(self) -> u16 {
        self.rows[0] as u16 | (self.rows[1] as u16) << 3 | (self.rows[2] as u16) << 6
    }

    /// The 168 elements of `GL_3(Z/2)` in ascending bit order.
    pub fn all() -> &'static [Automorphism] {
        &tables().all
    }

    pub fn apply(self, v: Vec3) -> Vec3 {
        Vec3(apply_rows(self.rows, v.0))
    }

    /// Matrix product `self · other`: apply `self`, then `other`.
    pub fn compose(self, other: Automorphism) -> Automorphism {
        Automorphism {
            rows: self.rows.map(|r| apply_rows(other.rows, r)),
        }
    }

    pub fn inverse(self) -> Automorphism {
        let bits = tables().inverse[self.bits() as usize];
        Automorphism::from_bits(bits).expect("inverse table holds invertible matrices")
    }

    pub fn is_identity(self) -> bool {
        self == Self::IDENTITY
    }
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:03b} {:03b} {:03b}]",
            self.rows[0], self.rows[1], self.rows[2]
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_has_168_elements() {
        assert_eq!(Automorphism::all().len(), 168);
        assert!(Automorphism::all().contains(&Automorphism::IDENTITY));
    }

    #[test]
    fn right_action_is_compatible_with_product() {
        let all = Automorphism::all();
        for (i, m) in all.iter().enumerate().step_by(7) {
            for n in all.iter().skip(i % 5).step_by(11) {
                for v in Vec3::all() {
                    assert_eq!(n.apply(m.apply(v)), m.compose(*n).apply(v));
                }
            }
        }
    }

    #[test]
    fn inverses() {
        for m in Automorphism::all() {
            assert!(m.compose(m.inverse()).is_identity());
            assert!(m.inverse().compose(*m).is_identity());
        }
    }

    #[test]
    fn transitive_on_nonzero_vectors_with_stabiliser_24() {
        let a = Vec3::new(1).unwrap();
        for target in Vec3::all().filter(|v| !v.is_zero()) {
            let count = Automorphism::all()
                .iter()
                .filter(|m| m.apply(a) == target)
                .count();
            assert_eq!(count, 24);
        }
    }

    #[test]
    fn singular_bits_rejected() {
        assert!(Automorphism::from_bits(0).is_none());
        // rows 001, 010, 011 are dependent
        assert!(Automorphism::from_bits(1 | 2 << 3 | 3 << 6).is_none());
        assert!(Automorphism::from_bits(600).is_none());
    }
}
