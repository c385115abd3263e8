use super::f2::Automorphism;
use super::labels::{LabelAssignment, Letter};
use crate::error::{Error, Result};

/// Enumeration order of candidate matrices during the backtracking search.
/// Different orders yield different, equally valid, families.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum SearchOrder {
    #[default]
    Ascending,
    Descending,
}

/// The automorphisms `[xy]` for ordered pairs of named letters: `[xy]` sends
/// `x` to `y`, `[yx] = [xy]^{-1}` and `[AC][CD] = [AI][ID]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionFamily {
    maps: [[Option<Automorphism>; 6]; 6],
}

const EQ2: [(Letter, Letter); 4] = [
    (Letter::A, Letter::C),
    (Letter::C, Letter::D),
    (Letter::A, Letter::I),
    (Letter::D, Letter::I),
];

fn unordered_pairs() -> Vec<(Letter, Letter)> {
    let mut pairs = Vec::with_capacity(15);
    for (i, &x) in Letter::NAMED.iter().enumerate() {
        for &y in &Letter::NAMED[i + 1..] {
            pairs.push((x, y));
        }
    }
    pairs
}

impl TransitionFamily {
    /// `[xy]`; panics on equal or unnamed letters.
    pub fn get(&self, x: Letter, y: Letter) -> Automorphism {
        self.maps[x.index()][y.index()].unwrap_or_else(|| panic!("no transition [{x}{y}]"))
    }

    /// Backtracking search over `GL_3(Z/2)` for a family satisfying all
    /// constraints under `labels`.
    pub fn solve(labels: &LabelAssignment, order: SearchOrder) -> Result<TransitionFamily> {
        let pairs = unordered_pairs();
        let candidates: Vec<Vec<Automorphism>> = pairs
            .iter()
            .map(|&(x, y)| {
                let (vx, vy) = (labels.vector(x), labels.vector(y));
                let mut c: Vec<Automorphism> = Automorphism::all()
                    .iter()
                    .copied()
                    .filter(|m| m.apply(vx) == vy)
                    .collect();
                if order == SearchOrder::Descending {
                    c.reverse();
                }
                c
            })
            .collect();

        let mut family = TransitionFamily { maps: [[None; 6]; 6] };
        if family.extend(&pairs, &candidates, 0) {
            family.validate(labels)?;
            Ok(family)
        } else {
            Err(Error::NoTransitionFamily)
        }
    }

    fn set(&mut self, x: Letter, y: Letter, m: Option<Automorphism>) {
        self.maps[x.index()][y.index()] = m;
        self.maps[y.index()][x.index()] = m.map(Automorphism::inverse);
    }

    fn eq2_holds_or_open(&self) -> bool {
        let get = |(x, y): (Letter, Letter)| self.maps[x.index()][y.index()];
        match (get(EQ2[0]), get(EQ2[1]), get(EQ2[2]), get(EQ2[3])) {
            (Some(ac), Some(cd), Some(ai), Some(di)) => ac.compose(cd) == ai.compose(di.inverse()),
            _ => true,
        }
    }

    fn extend(&mut self, pairs: &[(Letter, Letter)], candidates: &[Vec<Automorphism>], depth: usize) -> bool {
        let Some(&(x, y)) = pairs.get(depth) else {
            return true;
        };
        for &m in &candidates[depth] {
            self.set(x, y, Some(m));
            if self.eq2_holds_or_open() && self.extend(pairs, candidates, depth + 1) {
                return true;
            }
        }
        self.set(x, y, None);
        false
    }

    /// Checks `[xy](x) = y`, `[xy][yx] = id` and `[AC][CD] = [AI][ID]`.
    pub fn validate(&self, labels: &LabelAssignment) -> Result<()> {
        for x in Letter::NAMED {
            for y in Letter::NAMED {
                if x == y {
                    continue;
                }
                let m = self.maps[x.index()][y.index()].ok_or(Error::NoTransitionFamily)?;
                if m.apply(labels.vector(x)) != labels.vector(y) {
                    return Err(Error::Condition(format!("[{x}{y}] does not send {x} to {y}")));
                }
                if !m.compose(self.get(y, x)).is_identity() {
                    return Err(Error::Condition(format!("[{x}{y}][{y}{x}] is not the identity")));
                }
            }
        }
        use Letter::*;
        if self.get(A, C).compose(self.get(C, D)) != self.get(A, I).compose(self.get(I, D)) {
            return Err(Error::Condition("[AC][CD] != [AI][ID]".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::GammaElement;
    use Letter::*;

    fn families() -> Vec<(LabelAssignment, TransitionFamily)> {
        let mut out = Vec::new();
        for labels in [LabelAssignment::canonical(), LabelAssignment::alternate()] {
            for order in [SearchOrder::Ascending, SearchOrder::Descending] {
                let tf = TransitionFamily::solve(&labels, order).unwrap();
                out.push((labels.clone(), tf));
            }
        }
        out
    }

    #[test]
    fn ab_ba_is_identity() {
        for (_, tf) in families() {
            assert!(tf.get(A, B).compose(tf.get(B, A)).is_identity());
        }
    }

    #[test]
    fn loop_identity_holds_as_matrices() {
        for (_, tf) in families() {
            assert_eq!(
                tf.get(A, C).compose(tf.get(C, D)),
                tf.get(A, I).compose(tf.get(I, D))
            );
        }
    }

    #[test]
    fn ab_sends_a_to_b() {
        for (labels, tf) in families() {
            assert_eq!(tf.get(A, B).apply(labels.vector(A)), labels.vector(B));
        }
    }

    #[test]
    fn j_loop_product_in_gamma() {
        for (_, tf) in families() {
            let prod = GammaElement::new(-1, tf.get(I, A))
                .mul(GammaElement::new(2, tf.get(A, C)))
                .mul(GammaElement::new(0, tf.get(C, D)));
            assert_eq!(prod, GammaElement::new(1, tf.get(I, D)));
        }
    }

    #[test]
    fn orders_give_distinct_families() {
        let labels = LabelAssignment::canonical();
        let a = TransitionFamily::solve(&labels, SearchOrder::Ascending).unwrap();
        let b = TransitionFamily::solve(&labels, SearchOrder::Descending).unwrap();
        assert_ne!(a, b);
    }
}
