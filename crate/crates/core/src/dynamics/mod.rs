//! The space `X = (Z/p)^Z x (Z/2)^3`, the group `Z x GL_3(Z/2)` acting on it
//! from the right, cylinder sets and the transition automorphisms `[xy]`.

mod cylinder;
mod f2;
mod gamma;
mod labels;
mod point;
mod transition;

pub use cylinder::{CylinderRecord, CylinderSet, Symbol};
pub use f2::{Automorphism, Vec3};
pub use gamma::{GammaElement, GammaRecord};
pub use labels::{LabelAssignment, Letter, TorsionLabel};
pub use point::{CoordinateSource, Fill, LazyPoint};
pub use transition::{SearchOrder, TransitionFamily};

use crate::error::Result;

/// The two arbitrary choices behind `S`: which vector each letter names and
/// which matrices `[xy]` are used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conventions {
    pub labels: LabelAssignment,
    pub transitions: TransitionFamily,
}

impl Conventions {
    pub fn new(labels: LabelAssignment, order: SearchOrder) -> Result<Self> {
        let transitions = TransitionFamily::solve(&labels, order)?;
        Ok(Conventions { labels, transitions })
    }

    pub fn canonical() -> Self {
        Self::new(LabelAssignment::canonical(), SearchOrder::Ascending)
            .expect("canonical conventions are solvable")
    }

    pub fn alternate() -> Self {
        Self::new(LabelAssignment::alternate(), SearchOrder::Descending)
            .expect("alternate conventions are solvable")
    }

    pub fn cylinder(&self, pattern: &str, letter: Letter) -> CylinderSet {
        CylinderSet::parse(pattern, self.labels.torsion(letter)).unwrap_or_else(|e| panic!("{e}"))
    }

    /// `[xy]` as a group element.
    pub fn tr(&self, x: Letter, y: Letter) -> GammaElement {
        GammaElement::mat(self.transitions.get(x, y))
    }
}
