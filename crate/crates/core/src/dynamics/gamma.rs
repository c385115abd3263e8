use std::fmt;

use serde::{Deserialize, Serialize};

use super::f2::Automorphism;

/// Element `t^shift · mat` of `Z x GL_3(Z/2)`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaElement {
    pub shift: i64,
    pub mat: Automorphism,
}

impl GammaElement {
    pub const IDENTITY: GammaElement = GammaElement {
        shift: 0,
        mat: Automorphism::IDENTITY,
    };

    pub fn new(shift: i64, mat: Automorphism) -> Self {
        GammaElement { shift, mat }
    }

    /// Pure shift `t^n`.
    pub fn t(n: i64) -> Self {
        GammaElement::new(n, Automorphism::IDENTITY)
    }

    pub fn mat(mat: Automorphism) -> Self {
        GammaElement::new(0, mat)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: GammaElement) -> GammaElement {
        GammaElement {
            shift: self.shift + other.shift,
            mat: self.mat.compose(other.mat),
        }
    }

    pub fn inverse(self) -> GammaElement {
        GammaElement {
            shift: -self.shift,
            mat: self.mat.inverse(),
        }
    }

    pub fn is_identity(self) -> bool {
        self.shift == 0 && self.mat.is_identity()
    }

    /// Total order key used for canonical forms.
    pub fn key(self) -> i64 {
        self.shift * 512 + self.mat.bits() as i64
    }
}

impl fmt::Debug for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^{}·{:?}", self.shift, self.mat)
    }
}

impl fmt::Display for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.shift, self.mat.is_identity()) {
            (0, true) => write!(f, "e"),
            (s, true) => write!(f, "t^{s}"),
            (0, false) => write!(f, "m{}", self.mat.bits()),
            (s, false) => write!(f, "t^{s}·m{}", self.mat.bits()),
        }
    }
}

/// Wire form: `(shift, 9-bit matrix)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaRecord {
    pub shift: i64,
    pub matrix: u16,
}

impl From<GammaElement> for GammaRecord {
    fn from(g: GammaElement) -> Self {
        GammaRecord {
            shift: g.shift,
            matrix: g.mat.bits(),
        }
    }
}

impl TryFrom<GammaRecord> for GammaElement {
    type Error = crate::Error;

    fn try_from(r: GammaRecord) -> crate::Result<Self> {
        let mat = Automorphism::from_bits(r.matrix)
            .ok_or_else(|| crate::Error::Format(format!("singular matrix code {}", r.matrix)))?;
        Ok(GammaElement::new(r.shift, mat))
    }
}

impl Serialize for GammaElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GammaRecord::from(*self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for GammaElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = GammaRecord::deserialize(d)?;
        GammaElement::try_from(r).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_pair_multiplies_to_identity() {
        let m = Automorphism::all()[17];
        let g = GammaElement::new(1, m);
        let h = GammaElement::new(-1, m.inverse());
        assert!(g.mul(h).is_identity());
        assert_eq!(g.inverse(), h);
    }

    #[test]
    fn shifts_compose() {
        assert_eq!(GammaElement::t(2).mul(GammaElement::t(3)), GammaElement::t(5));
    }

    #[test]
    fn serde_round_trip() {
        let g = GammaElement::new(-3, Automorphism::all()[100]);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<GammaElement>(&s).unwrap(), g);
        assert!(serde_json::from_str::<GammaElement>(r#"{"shift":0,"matrix":0}"#).is_err());
    }
}
