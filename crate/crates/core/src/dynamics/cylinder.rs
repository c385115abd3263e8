use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::gamma::GammaElement;
use super::labels::{LabelAssignment, Letter, TorsionLabel};
use super::point::LazyPoint;
use crate::error::{Error, Result};
use crate::exact::{rat, rpow, Rational};

/// Constraint on one coordinate of `(Z/p)^Z`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Symbol {
    /// The value is `0`.
    Zero,
    /// The value is one of `1, ..., p-1`.
    NonZero,
}

impl Symbol {
    pub fn admits(self, value: u32) -> bool {
        match self {
            Symbol::Zero => value == 0,
            Symbol::NonZero => value != 0,
        }
    }

    fn as_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::NonZero => '1',
        }
    }
}

/// Finitely many coordinate constraints plus a fixed torsion label.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CylinderSet {
    constraints: BTreeMap<i64, Symbol>,
    label: TorsionLabel,
}

impl CylinderSet {
    pub fn new(constraints: BTreeMap<i64, Symbol>, label: TorsionLabel) -> Self {
        CylinderSet { constraints, label }
    }

    /// Parses patterns like `1[0]1`: the bracketed symbol sits at position
    /// 0. An empty pattern constrains nothing.
    pub fn parse(pattern: &str, label: TorsionLabel) -> Result<Self> {
        let bad = || Error::Format(format!("bad cylinder pattern {pattern:?}"));
        let mut symbols = Vec::new();
        let mut origin = None;
        let mut chars = pattern.chars().peekable();
        while let Some(c) = chars.next() {
            let sym = match c {
                '0' => Symbol::Zero,
                '1' => Symbol::NonZero,
                '[' => {
                    let inner = chars.next().ok_or_else(bad)?;
                    if chars.next() != Some(']') || origin.is_some() {
                        return Err(bad());
                    }
                    origin = Some(symbols.len());
                    match inner {
                        '0' => Symbol::Zero,
                        '1' => Symbol::NonZero,
                        _ => return Err(bad()),
                    }
                }
                _ => return Err(bad()),
            };
            symbols.push(sym);
        }
        if symbols.is_empty() {
            return Ok(CylinderSet::new(BTreeMap::new(), label));
        }
        let origin = origin.ok_or_else(bad)? as i64;
        let constraints = symbols
            .into_iter()
            .enumerate()
            .map(|(i, s)| (i as i64 - origin, s))
            .collect();
        Ok(CylinderSet::new(constraints, label))
    }

    pub fn constraints(&self) -> &BTreeMap<i64, Symbol> {
        &self.constraints
    }

    pub fn label(&self) -> TorsionLabel {
        self.label
    }

    pub fn zeros(&self) -> usize {
        self.constraints.values().filter(|s| **s == Symbol::Zero).count()
    }

    pub fn nonzeros(&self) -> usize {
        self.constraints.len() - self.zeros()
    }

    /// Haar measure: `(1/p)^zeros ((p-1)/p)^nonzeros / 8`.
    pub fn measure(&self, p: u32) -> Rational {
        let p = p as i64;
        rpow(&rat(1, p), self.zeros() as u64)
            * rpow(&rat(p - 1, p), self.nonzeros() as u64)
            * Rational::new(BigInt::from(1), BigInt::from(8))
    }

    /// Image under the right action of `g`: positions move from `i` to
    /// `i - shift`, the label vector is multiplied by the matrix part.
    pub fn act(&self, g: GammaElement, labels: &LabelAssignment) -> CylinderSet {
        let vector = g.mat.apply(self.label.vector);
        CylinderSet {
            constraints: self.constraints.iter().map(|(&i, &s)| (i - g.shift, s)).collect(),
            label: TorsionLabel {
                letter: labels.letter(vector),
                vector,
            },
        }
    }

    pub fn contains(&self, x: &LazyPoint) -> bool {
        x.label() == self.label.vector && self.constraints.iter().all(|(&i, s)| s.admits(x.coordinate(i)))
    }

    /// Empty intersection: different labels or a conflicting position.
    pub fn is_disjoint(&self, other: &CylinderSet) -> bool {
        self.label.vector != other.label.vector
            || self
                .constraints
                .iter()
                .any(|(i, s)| other.constraints.get(i).is_some_and(|t| t != s))
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &CylinderSet) -> bool {
        self.label.vector == other.label.vector
            && other
                .constraints
                .iter()
                .all(|(i, s)| self.constraints.get(i) == Some(s))
    }

    /// Pattern in the bracket notation, e.g. `1[0]1,I`. Unconstrained
    /// positions inside the window print as `.`.
    pub fn pattern(&self) -> String {
        let mut out = String::new();
        if let (Some((&lo, _)), Some((&hi, _))) = (
            self.constraints.first_key_value(),
            self.constraints.last_key_value(),
        ) {
            for i in lo.min(0)..=hi.max(0) {
                let c = self.constraints.get(&i).map_or('.', |s| s.as_char());
                if i == 0 {
                    out.push('[');
                    out.push(c);
                    out.push(']');
                } else {
                    out.push(c);
                }
            }
        }
        out
    }
}

impl fmt::Display for CylinderSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.pattern(), self.label.letter)
    }
}

/// Wire form: position → symbol map plus the label letter and vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylinderRecord {
    pub constraints: BTreeMap<i64, Symbol>,
    pub letter: Letter,
    pub vector: u8,
}

impl From<&CylinderSet> for CylinderRecord {
    fn from(c: &CylinderSet) -> Self {
        CylinderRecord {
            constraints: c.constraints.clone(),
            letter: c.label.letter,
            vector: c.label.vector.bits(),
        }
    }
}

impl TryFrom<CylinderRecord> for CylinderSet {
    type Error = Error;

    fn try_from(r: CylinderRecord) -> Result<Self> {
        let vector = super::f2::Vec3::new(r.vector)
            .ok_or_else(|| Error::Format(format!("label vector {} out of range", r.vector)))?;
        Ok(CylinderSet::new(
            r.constraints,
            TorsionLabel {
                letter: r.letter,
                vector,
            },
        ))
    }
}

impl Serialize for CylinderSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CylinderRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CylinderSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        CylinderSet::try_from(CylinderRecord::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Letter, TransitionFamily};
    use crate::exact::rat;

    fn cyl(pattern: &str, letter: Letter) -> CylinderSet {
        let labels = LabelAssignment::canonical();
        CylinderSet::parse(pattern, labels.torsion(letter)).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let c = cyl("1[0]1", Letter::I);
        assert_eq!(c.constraints().len(), 3);
        assert_eq!(c.constraints()[&-1], Symbol::NonZero);
        assert_eq!(c.constraints()[&0], Symbol::Zero);
        assert_eq!(c.pattern(), "1[0]1");
        assert_eq!(cyl("", Letter::U1).constraints().len(), 0);
        assert!(CylinderSet::parse("101", LabelAssignment::canonical().torsion(Letter::A)).is_err());
    }

    #[test]
    fn measures() {
        assert_eq!(cyl("1[0]1", Letter::I).measure(2), rat(1, 64));
        assert_eq!(cyl("1[0]1", Letter::I).measure(3), rat(1, 54));
        assert_eq!(cyl("01[1]00", Letter::A).measure(2), rat(1, 256));
    }

    #[test]
    fn identity_acts_trivially() {
        let labels = LabelAssignment::canonical();
        let c = cyl("01[1]00", Letter::A);
        assert_eq!(c.act(GammaElement::IDENTITY, &labels), c);
    }

    #[test]
    fn matrix_part_only_relabels() {
        let labels = LabelAssignment::canonical();
        let tf = TransitionFamily::solve(&labels, Default::default()).unwrap();
        let c = cyl("[1]0", Letter::B);
        let image = c.act(GammaElement::mat(tf.get(Letter::B, Letter::A)), &labels);
        assert_eq!(image, cyl("[1]0", Letter::A));
    }

    #[test]
    fn shift_moves_positions_down() {
        let labels = LabelAssignment::canonical();
        let c = cyl("[1]1", Letter::B);
        let image = c.act(GammaElement::t(1), &labels);
        assert_eq!(image, cyl("1[1]", Letter::B));
        assert_eq!(
            image.constraints().keys().copied().collect::<Vec<_>>(),
            vec![-1, 0]
        );
    }

    #[test]
    fn disjointness_and_subsets() {
        let a = cyl("1[1]01", Letter::A);
        let b = cyl("0[1]01", Letter::A);
        let c = cyl("[1]", Letter::A);
        assert!(a.is_disjoint(&b));
        assert!(!a.is_disjoint(&c));
        assert!(a.is_subset(&c));
        assert!(!c.is_subset(&a));
        assert!(a.is_disjoint(&cyl("1[1]01", Letter::B)));
    }
}
