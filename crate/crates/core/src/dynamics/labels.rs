use std::fmt;

use serde::{Deserialize, Serialize};

use super::f2::Vec3;
use crate::error::{Error, Result};

/// Names for the eight elements of `(Z/2)^3`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
    C,
    D,
    F,
    I,
    U1,
    U2,
}

impl Letter {
    pub const ALL: [Letter; 8] = [
        Letter::A,
        Letter::B,
        Letter::C,
        Letter::D,
        Letter::F,
        Letter::I,
        Letter::U1,
        Letter::U2,
    ];

    /// The six letters that carry nonzero vectors and appear in `S`.
    pub const NAMED: [Letter; 6] = [Letter::A, Letter::B, Letter::C, Letter::D, Letter::F, Letter::I];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_named(self) -> bool {
        self.index() < 6
    }

    pub fn name(self) -> &'static str {
        match self {
            Letter::A => "A",
            Letter::B => "B",
            Letter::C => "C",
            Letter::D => "D",
            Letter::F => "F",
            Letter::I => "I",
            Letter::U1 => "U1",
            Letter::U2 => "U2",
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bijection between letters and `(Z/2)^3`. The six named letters get
/// nonzero vectors; exactly one of `U1`, `U2` is zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelAssignment {
    vectors: [Vec3; 8],
}

impl LabelAssignment {
    pub fn new(vectors: [Vec3; 8]) -> Result<Self> {
        let mut seen = [false; 8];
        for v in vectors {
            if std::mem::replace(&mut seen[v.bits() as usize], true) {
                return Err(Error::LabelAssignment(format!("{v:?} used twice")));
            }
        }
        if vectors[..6].iter().any(|v| v.is_zero()) {
            return Err(Error::LabelAssignment("a named letter is mapped to zero".into()));
        }
        Ok(LabelAssignment { vectors })
    }

    /// `U1 = 0`; `A, B, C, D, F, I, U2` take `1..=7` in order.
    pub fn canonical() -> Self {
        let v = |b| Vec3::new(b).unwrap();
        Self::new([v(1), v(2), v(3), v(4), v(5), v(6), v(0), v(7)]).unwrap()
    }

    /// A second valid choice with `U2 = 0` and the named letters permuted.
    pub fn alternate() -> Self {
        let v = |b| Vec3::new(b).unwrap();
        Self::new([v(6), v(3), v(7), v(1), v(4), v(2), v(5), v(0)]).unwrap()
    }

    pub fn vector(&self, letter: Letter) -> Vec3 {
        self.vectors[letter.index()]
    }

    pub fn letter(&self, v: Vec3) -> Letter {
        Letter::ALL[self
            .vectors
            .iter()
            .position(|w| *w == v)
            .expect("assignment is a bijection")]
    }

    pub fn torsion(&self, letter: Letter) -> TorsionLabel {
        TorsionLabel {
            letter,
            vector: self.vector(letter),
        }
    }
}

/// A letter together with the vector it names under some assignment.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct TorsionLabel {
    pub letter: Letter,
    pub vector: Vec3,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_assignments_valid() {
        for a in [LabelAssignment::canonical(), LabelAssignment::alternate()] {
            for l in Letter::ALL {
                assert_eq!(a.letter(a.vector(l)), l);
            }
            let zeros = [Letter::U1, Letter::U2]
                .iter()
                .filter(|l| a.vector(**l).is_zero())
                .count();
            assert_eq!(zeros, 1);
        }
    }

    #[test]
    fn rejects_bad_assignments() {
        let v = |b| Vec3::new(b).unwrap();
        assert!(LabelAssignment::new([v(0), v(2), v(3), v(4), v(5), v(6), v(1), v(7)]).is_err());
        assert!(LabelAssignment::new([v(1), v(1), v(3), v(4), v(5), v(6), v(0), v(7)]).is_err());
    }
}
