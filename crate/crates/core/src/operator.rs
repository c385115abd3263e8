//! The operators `S` and `T` as finite formal sums `Σ θ_i χ_i` over a
//! partition of `X` into fourteen cylinders and their complement.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::dynamics::{Conventions, CylinderRecord, CylinderSet, GammaElement, LazyPoint, Letter};
use crate::error::{Error, Result};
use crate::exact::{int, parse_fraction, rat, rpow, to_fraction_string, Rational};

/// Index of a partition piece, `1..=15`; piece 15 is the complement of the
/// other fourteen.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Piece(pub u8);

impl Piece {
    pub const REST: Piece = Piece(15);

    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    /// Letter of the label carried by every point of this piece; `None` for
    /// the complement.
    pub fn letter(self) -> Option<Letter> {
        Some(match self.0 {
            1 => Letter::I,
            2..=7 => Letter::A,
            8 | 9 => Letter::B,
            10 | 11 => Letter::C,
            12 | 13 => Letter::D,
            14 => Letter::F,
            _ => return None,
        })
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Piece::REST {
            write!(f, "U")
        } else {
            write!(f, "({})", self.0)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    Cylinder(CylinderSet),
    /// Everything not covered by the cylinder pieces.
    Rest,
}

/// One summand `θ · χ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CPTerm {
    pub theta: Vec<(Rational, GammaElement)>,
    pub region: Region,
}

impl CPTerm {
    pub fn coefficient(&self, g: GammaElement) -> Rational {
        self.theta
            .iter()
            .find(|(_, h)| *h == g)
            .map_or_else(Rational::zero, |(c, _)| c.clone())
    }

    pub fn support(&self) -> impl Iterator<Item = GammaElement> + '_ {
        self.theta.iter().map(|(_, g)| *g)
    }
}

/// Crossed-product element over the fifteen-piece partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CPElement {
    terms: Vec<CPTerm>,
    /// Cylinders whose disjoint union is the `Rest` piece.
    rest_cover: Vec<CylinderSet>,
    /// Piece indices grouped by label vector bits, for point lookup.
    by_label: [Vec<usize>; 8],
}

impl CPElement {
    pub fn new(terms: Vec<CPTerm>, rest_cover: Vec<CylinderSet>) -> Result<Self> {
        if terms.len() != 15 || terms[14].region != Region::Rest {
            return Err(Error::Format(
                "expected fourteen cylinder pieces followed by the complement".into(),
            ));
        }
        let mut by_label: [Vec<usize>; 8] = Default::default();
        for (i, term) in terms.iter().enumerate() {
            match &term.region {
                Region::Cylinder(c) => by_label[c.label().vector.bits() as usize].push(i),
                Region::Rest if i != 14 => {
                    return Err(Error::Format("complement must be the last piece".into()))
                }
                Region::Rest => {}
            }
            let mut gammas: Vec<i64> = term.support().map(GammaElement::key).collect();
            gammas.sort_unstable();
            if gammas.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Format(format!(
                    "repeated group element in piece {}",
                    i + 1
                )));
            }
        }
        Ok(CPElement {
            terms,
            rest_cover,
            by_label,
        })
    }

    pub fn terms(&self) -> &[CPTerm] {
        &self.terms
    }

    pub fn term(&self, piece: Piece) -> &CPTerm {
        &self.terms[piece.index()]
    }

    pub fn pieces(&self) -> impl Iterator<Item = Piece> {
        (1..=15).map(Piece)
    }

    pub fn cylinder(&self, piece: Piece) -> Option<&CylinderSet> {
        match &self.term(piece).region {
            Region::Cylinder(c) => Some(c),
            Region::Rest => None,
        }
    }

    pub fn rest_cover(&self) -> &[CylinderSet] {
        &self.rest_cover
    }

    /// Piece containing `x`.
    pub fn piece_of(&self, x: &LazyPoint) -> Piece {
        for &i in &self.by_label[x.label().bits() as usize] {
            if let Region::Cylinder(c) = &self.terms[i].region {
                if c.contains(x) {
                    return Piece(i as u8 + 1);
                }
            }
        }
        Piece::REST
    }

    /// All `(piece, γ)` with `γ` in the support of that piece's `θ`.
    pub fn support_pairs(&self) -> Vec<(Piece, GammaElement)> {
        self.pieces()
            .flat_map(|p| self.term(p).support().map(move |g| (p, g)))
            .collect()
    }

    /// Copy with one coefficient replaced (zero removes the group element).
    pub fn with_coefficient(&self, piece: Piece, g: GammaElement, coef: Rational) -> CPElement {
        let mut out = self.clone();
        let theta = &mut out.terms[piece.index()].theta;
        theta.retain(|(_, h)| *h != g);
        if !coef.is_zero() {
            theta.push((coef, g));
        }
        out
    }
}

/// The operator `S`.
pub fn build_s(conv: &Conventions) -> CPElement {
    use Letter::*;
    let t = GammaElement::t;
    let tr = |x, y| conv.tr(x, y);
    let c = |pattern, letter| Region::Cylinder(conv.cylinder(pattern, letter));
    let term = |theta: Vec<(i64, GammaElement)>, region| CPTerm {
        theta: theta.into_iter().map(|(k, g)| (int(k), g)).collect(),
        region,
    };

    let terms = vec![
        term(
            vec![(-1, t(1).mul(tr(I, D))), (1, t(-1).mul(tr(I, A)))],
            c("1[0]1", I),
        ),
        term(vec![(-1, t(2).mul(tr(A, C))), (-2, t(-1))], c("1[1]01", A)),
        term(vec![(-1, t(2).mul(tr(A, C)))], c("0[1]01", A)),
        term(vec![(-2, t(-1))], c("1[1]00", A)),
        term(vec![], c("0[1]00", A)),
        term(vec![(-2, t(-1))], c("1[1]1", A)),
        term(vec![(-1, tr(A, B))], c("0[1]1", A)),
        term(vec![(-1, t(1))], c("[1]1", B)),
        term(vec![(-1, tr(B, A))], c("[1]0", B)),
        term(vec![(-1, t(1)), (1, tr(C, D))], c("[1]1", C)),
        term(vec![(1, tr(C, D))], c("[1]0", C)),
        term(vec![(-1, t(1))], c("[1]1", D)),
        term(vec![(-1, tr(D, F))], c("[1]0", D)),
        term(vec![], c("[1]0", F)),
        term(vec![], Region::Rest),
    ];

    let rest_cover = vec![
        conv.cylinder("[0]", A),
        conv.cylinder("[0]", B),
        conv.cylinder("[0]", C),
        conv.cylinder("[0]", D),
        conv.cylinder("", U1),
        conv.cylinder("", U2),
        conv.cylinder("[0]", F),
        conv.cylinder("[1]1", F),
        conv.cylinder("[1]", I),
        conv.cylinder("1[0]0", I),
        conv.cylinder("0[0]1", I),
        conv.cylinder("0[0]0", I),
    ];

    CPElement::new(terms, rest_cover).expect("S is well formed")
}

/// Pieces on which `T = S + (1 - χ(U) - χ(1[0]1,I) - χ([1]0,F))` does not
/// add the identity.
pub const NO_IDENTITY: [Piece; 3] = [Piece(1), Piece(14), Piece::REST];

/// `T`, normalized over the same partition: `(+1, e)` is appended to every
/// piece except those in [`NO_IDENTITY`].
pub fn build_t(s: &CPElement) -> CPElement {
    let mut out = s.clone();
    for (i, term) in out.terms.iter_mut().enumerate() {
        if !NO_IDENTITY.contains(&Piece(i as u8 + 1)) {
            term.theta.push((Rational::one(), GammaElement::IDENTITY));
        }
    }
    CPElement::new(out.terms, out.rest_cover).expect("T is well formed")
}

/// Result of the partition check at one `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub p: u32,
    /// Exact measure of each of the fourteen cylinder pieces.
    pub piece_measures: Vec<String>,
    pub rest_measure: String,
    pub rest_closed_form: String,
    pub total: String,
    pub cylinders_checked: usize,
    pub violation: Option<String>,
}

impl PartitionReport {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

/// `(1/8)(2 + 5α + α³ + 2βα² + β + β²)` with `α = 1/p`, `β = (p-1)/p`.
pub fn rest_measure_closed_form(p: u32) -> Rational {
    let p = p as i64;
    let a = rat(1, p);
    let b = rat(p - 1, p);
    (int(2) + int(5) * &a + rpow(&a, 3) + int(2) * &b * &a * &a + &b + &b * &b) * rat(1, 8)
}

/// Certifies that the fourteen cylinders and the twelve-piece cover of the
/// complement are pairwise disjoint and that their measures sum to one.
/// Cylinders are clopen, so disjointness plus full measure means they cover
/// `X` exactly.
pub fn verify_partition(s: &CPElement, p: u32) -> PartitionReport {
    let pieces: Vec<(String, &CylinderSet)> = s
        .pieces()
        .filter_map(|pc| s.cylinder(pc).map(|c| (format!("piece {pc}"), c)))
        .chain(
            s.rest_cover()
                .iter()
                .enumerate()
                .map(|(i, c)| (format!("U-cover {} {c}", i + 1), c)),
        )
        .collect();

    let mut violation = None;
    'outer: for (i, (name_a, a)) in pieces.iter().enumerate() {
        for (name_b, b) in &pieces[i + 1..] {
            if !a.is_disjoint(b) {
                violation = Some(format!("{name_a} {a} meets {name_b} {b}"));
                break 'outer;
            }
        }
    }

    let piece_measures: Vec<Rational> = s
        .pieces()
        .filter_map(|pc| s.cylinder(pc).map(|c| c.measure(p)))
        .collect();
    let rest: Rational = s
        .rest_cover()
        .iter()
        .fold(Rational::zero(), |acc, c| acc + c.measure(p));
    let total = piece_measures.iter().fold(rest.clone(), |acc, m| acc + m);
    let closed = rest_measure_closed_form(p);

    if violation.is_none() && !total.is_one() {
        violation = Some(format!("total measure {total} != 1"));
    }
    if violation.is_none() && rest != closed {
        violation = Some(format!("complement measure {rest} != closed form {closed}"));
    }

    PartitionReport {
        p,
        piece_measures: piece_measures.iter().map(to_fraction_string).collect(),
        rest_measure: to_fraction_string(&rest),
        rest_closed_form: to_fraction_string(&closed),
        total: to_fraction_string(&total),
        cylinders_checked: pieces.len(),
        violation,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct ThetaRecord {
    coef: String,
    gamma: GammaElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RegionRecord {
    Cylinder(CylinderRecord),
    Rest,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct TermRecord {
    piece: u8,
    theta: Vec<ThetaRecord>,
    region: RegionRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct ElementRecord {
    terms: Vec<TermRecord>,
    rest_cover: Vec<CylinderRecord>,
}

impl Serialize for CPElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let record = ElementRecord {
            terms: self
                .terms
                .iter()
                .enumerate()
                .map(|(i, t)| TermRecord {
                    piece: i as u8 + 1,
                    theta: t
                        .theta
                        .iter()
                        .map(|(c, g)| ThetaRecord {
                            coef: to_fraction_string(c),
                            gamma: *g,
                        })
                        .collect(),
                    region: match &t.region {
                        Region::Cylinder(c) => RegionRecord::Cylinder(c.into()),
                        Region::Rest => RegionRecord::Rest,
                    },
                })
                .collect(),
            rest_cover: self.rest_cover.iter().map(Into::into).collect(),
        };
        record.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CPElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let record = ElementRecord::deserialize(d)?;
        let mut terms = Vec::with_capacity(record.terms.len());
        for t in record.terms {
            let theta = t
                .theta
                .into_iter()
                .map(|r| {
                    parse_fraction(&r.coef)
                        .map(|c| (c, r.gamma))
                        .ok_or_else(|| D::Error::custom(format!("bad coefficient {}", r.coef)))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let region = match t.region {
                RegionRecord::Cylinder(c) => {
                    Region::Cylinder(CylinderSet::try_from(c).map_err(D::Error::custom)?)
                }
                RegionRecord::Rest => Region::Rest,
            };
            terms.push(CPTerm { theta, region });
        }
        let rest_cover = record
            .rest_cover
            .into_iter()
            .map(CylinderSet::try_from)
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        CPElement::new(terms, rest_cover).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Letter::*;

    fn setup() -> (Conventions, CPElement, CPElement) {
        let conv = Conventions::canonical();
        let s = build_s(&conv);
        let t = build_t(&s);
        (conv, s, t)
    }

    #[test]
    fn summand_twelve_is_minus_t() {
        let (conv, s, _) = setup();
        let term = s.term(Piece(12));
        assert_eq!(term.region, Region::Cylinder(conv.cylinder("[1]1", D)));
        assert_eq!(term.theta, vec![(int(-1), GammaElement::t(1))]);
    }

    #[test]
    fn summand_five_is_zero() {
        let (conv, s, _) = setup();
        let term = s.term(Piece(5));
        assert_eq!(term.region, Region::Cylinder(conv.cylinder("0[1]00", A)));
        assert!(term.theta.is_empty());
    }

    #[test]
    fn t_on_final_piece_is_empty() {
        let (_, _, t) = setup();
        assert!(t.term(Piece(14)).theta.is_empty());
        assert!(t.term(Piece::REST).theta.is_empty());
    }

    #[test]
    fn t_on_b_piece_gains_identity() {
        let (conv, _, t) = setup();
        assert_eq!(
            t.term(Piece(9)).theta,
            vec![(int(-1), conv.tr(B, A)), (int(1), GammaElement::IDENTITY)]
        );
    }

    #[test]
    fn t_on_initial_piece_equals_s() {
        let (_, s, t) = setup();
        assert_eq!(s.term(Piece(1)), t.term(Piece(1)));
    }

    #[test]
    fn gammas_come_from_family_with_small_shifts() {
        let (conv, s, _) = setup();
        let mut allowed = vec![crate::dynamics::Automorphism::IDENTITY];
        for x in Letter::NAMED {
            for y in Letter::NAMED {
                if x != y {
                    allowed.push(conv.transitions.get(x, y));
                }
            }
        }
        for (_, g) in s.support_pairs() {
            assert!(allowed.contains(&g.mat));
            assert!((-1..=2).contains(&g.shift));
        }
    }

    #[test]
    fn partition_exact_for_small_p() {
        let (_, s, _) = setup();
        for p in 2..=10 {
            let report = verify_partition(&s, p);
            assert!(report.ok(), "{report:?}");
            assert_eq!(report.total, "1");
            assert_eq!(report.cylinders_checked, 26);
        }
    }

    #[test]
    fn rest_measure_at_two() {
        assert_eq!(rest_measure_closed_form(2), rat(45, 64));
    }

    #[test]
    fn a_pieces_partition_nonzero_origin() {
        let (conv, s, _) = setup();
        let whole = conv.cylinder("[1]", A);
        let a_pieces: Vec<&CylinderSet> = (2..=7).map(|i| s.cylinder(Piece(i)).unwrap()).collect();
        for (i, a) in a_pieces.iter().enumerate() {
            assert!(a.is_subset(&whole));
            for b in &a_pieces[i + 1..] {
                assert!(a.is_disjoint(b));
            }
        }
        for p in [2, 3, 7] {
            let sum = a_pieces
                .iter()
                .fold(Rational::zero(), |acc, c| acc + c.measure(p));
            assert_eq!(sum, whole.measure(p));
        }
    }

    #[test]
    fn overlapping_piece_is_reported() {
        let (conv, s, _) = setup();
        let mut terms = s.terms().to_vec();
        terms[4].region = Region::Cylinder(conv.cylinder("[1]0", A));
        let broken = CPElement::new(terms, s.rest_cover().to_vec()).unwrap();
        let report = verify_partition(&broken, 2);
        assert!(!report.ok());
    }

    #[test]
    fn json_round_trip() {
        let (_, _, t) = setup();
        let json = serde_json::to_string(&t).unwrap();
        let back: CPElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }
}
