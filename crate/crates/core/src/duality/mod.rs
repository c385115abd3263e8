//! Rewrites `T` as an element of the rational group ring of
//! `(Z/p^{⊕Z} ⋊ Z) × ((Z/2)^3 ⋊ GL_3(Z/2))` by Fourier duality, and checks
//! the identities the rewriting relies on.

mod cyclotomic;
mod finite;

pub use cyclotomic::{cyclotomic_polynomial, rational_value, reduce};
pub use finite::{
    algebra_mul, group_trace, regular_embedding, scaling_lemma_check, von_neumann_kernel_dim, AffineF2,
    Cyclic, FiniteGroup, GroupAlgebraElement, Product, RegularEmbedding, ScalingCheck,
};

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Automorphism, CylinderSet, GammaElement, LazyPoint, Symbol, Vec3};
use crate::error::{Error, Result};
use crate::exact::{int, parse_fraction, rat, to_fraction_string, Rational};
use crate::operator::{CPElement, Piece, Region};

/// Element of the abelian group `Z/p^{⊕Z} ⊕ (Z/2)^3`: finitely many
/// nonzero lamp values and a torsion vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianWord {
    pub lamps: BTreeMap<i64, u32>,
    pub torsion: Vec3,
}

impl AbelianWord {
    pub fn zero() -> Self {
        AbelianWord {
            lamps: BTreeMap::new(),
            torsion: Vec3::ZERO,
        }
    }

    pub fn add(&self, other: &AbelianWord, p: u32) -> AbelianWord {
        let mut lamps = self.lamps.clone();
        for (&i, &v) in &other.lamps {
            let e = lamps.entry(i).or_insert(0);
            *e = (*e + v) % p;
        }
        lamps.retain(|_, v| *v != 0);
        AbelianWord {
            lamps,
            torsion: self.torsion.add(other.torsion),
        }
    }

    /// Exponent of `ω` and sign of the character at `x`.
    fn character(&self, x: &LazyPoint) -> (u32, bool) {
        let p = x.p() as u64;
        let e = self.lamps.iter().fold(0u64, |acc, (&i, &v)| {
            (acc + v as u64 * x.coordinate(i) as u64) % p
        });
        (e as u32, self.torsion.dot(x.label()))
    }
}

/// Element of the rational group ring of the abelian part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianElement {
    pub p: u32,
    pub terms: BTreeMap<AbelianWord, Rational>,
}

impl AbelianElement {
    pub fn one(p: u32) -> Self {
        AbelianElement {
            p,
            terms: BTreeMap::from([(AbelianWord::zero(), Rational::one())]),
        }
    }

    pub fn mul(&self, other: &AbelianElement) -> AbelianElement {
        let mut terms = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                *terms.entry(a.add(b, self.p)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        terms.retain(|_, c: &mut Rational| !c.is_zero());
        AbelianElement { p: self.p, terms }
    }

    pub fn one_minus(&self) -> AbelianElement {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        *out.terms
            .entry(AbelianWord::zero())
            .or_insert_with(Rational::zero) += Rational::one();
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// `Σ c_a χ_a(x)` when rational.
    pub fn evaluate(&self, x: &LazyPoint) -> Option<Rational> {
        let mut poly = vec![Rational::zero(); self.p as usize];
        for (w, c) in &self.terms {
            let (e, odd) = w.character(x);
            if odd {
                poly[e as usize] -= c;
            } else {
                poly[e as usize] += c;
            }
        }
        rational_value(&poly, self.p)
    }
}

/// `σ_j = (1/p) Σ_a a·e_j`, the indicator of `x_j = 0`.
pub fn sigma(p: u32, j: i64) -> AbelianElement {
    let terms = (0..p)
        .map(|a| {
            let mut lamps = BTreeMap::new();
            if a != 0 {
                lamps.insert(j, a);
            }
            (
                AbelianWord {
                    lamps,
                    torsion: Vec3::ZERO,
                },
                rat(1, p as i64),
            )
        })
        .collect();
    AbelianElement { p, terms }
}

/// `δ_v = (1/8) Σ_w (-1)^{w·v} w`, the indicator of label `v`.
pub fn label_delta(p: u32, v: Vec3) -> AbelianElement {
    let terms = Vec3::all()
        .map(|w| {
            let sign = if w.dot(v) { -1 } else { 1 };
            (
                AbelianWord {
                    lamps: BTreeMap::new(),
                    torsion: w,
                },
                rat(sign, 8),
            )
        })
        .collect();
    AbelianElement { p, terms }
}

/// Fourier image of a cylinder's indicator function.
pub fn cylinder_indicator(c: &CylinderSet, p: u32) -> AbelianElement {
    let mut acc = label_delta(p, c.label().vector);
    for (&i, &s) in c.constraints() {
        let f = match s {
            Symbol::Zero => sigma(p, i),
            Symbol::NonZero => sigma(p, i).one_minus(),
        };
        acc = acc.mul(&f);
    }
    acc
}

/// Word `t^shift · M · a`: group part first, then the abelian part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub gamma: GammaElement,
    pub abelian: AbelianWord,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement {
    pub p: u32,
    pub terms: BTreeMap<Word, Rational>,
}

impl GroupRingElement {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_product(&mut self, coef: &Rational, gamma: GammaElement, f: &AbelianElement) {
        for (a, c) in &f.terms {
            let word = Word {
                gamma,
                abelian: a.clone(),
            };
            *self.terms.entry(word).or_insert_with(Rational::zero) += coef * c;
        }
        self.terms.retain(|_, c| !c.is_zero());
    }

    /// Coefficient of each `γ` at `x`, read back through the characters.
    pub fn evaluate(&self, x: &LazyPoint) -> Result<BTreeMap<GammaElement, Rational>> {
        let mut by_gamma: BTreeMap<GammaElement, AbelianElement> = BTreeMap::new();
        for (w, c) in &self.terms {
            by_gamma
                .entry(w.gamma)
                .or_insert_with(|| AbelianElement {
                    p: self.p,
                    terms: BTreeMap::new(),
                })
                .terms
                .insert(w.abelian.clone(), c.clone());
        }
        let mut out = BTreeMap::new();
        for (g, f) in by_gamma {
            let v = f
                .evaluate(x)
                .ok_or_else(|| Error::Format(format!("coefficient of {g} is not rational")))?;
            if !v.is_zero() {
                out.insert(g, v);
            }
        }
        Ok(out)
    }
}

fn region_indicator(elem: &CPElement, piece: Piece, p: u32) -> AbelianElement {
    match &elem.term(piece).region {
        Region::Cylinder(c) => cylinder_indicator(c, p),
        Region::Rest => {
            let mut acc = AbelianElement {
                p,
                terms: BTreeMap::new(),
            };
            for c in elem.rest_cover() {
                for (w, v) in cylinder_indicator(c, p).terms {
                    *acc.terms.entry(w).or_insert_with(Rational::zero) += v;
                }
            }
            acc.terms.retain(|_, c| !c.is_zero());
            acc
        }
    }
}

/// `θ_i χ_i` for one piece.
pub fn export_summand(elem: &CPElement, piece: Piece, p: u32) -> GroupRingElement {
    let mut out = GroupRingElement {
        p,
        terms: BTreeMap::new(),
    };
    let term = elem.term(piece);
    if term.theta.is_empty() {
        return out;
    }
    let f = region_indicator(elem, piece, p);
    for (c, g) in &term.theta {
        out.add_product(c, *g, &f);
    }
    out
}

/// `Σ_i θ_i χ_i` with every indicator replaced by its Fourier image.
pub fn export_group_ring(elem: &CPElement, p: u32) -> GroupRingElement {
    let mut out = GroupRingElement {
        p,
        terms: BTreeMap::new(),
    };
    for piece in elem.pieces() {
        for (w, c) in export_summand(elem, piece, p).terms {
            *out.terms.entry(w).or_insert_with(Rational::zero) += c;
        }
    }
    out.terms.retain(|_, c| !c.is_zero());
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct WordRecord {
    /// `[position, value]` pairs with nonzero value.
    lamps: Vec<(i64, u32)>,
    shift: i64,
    torsion: u8,
    matrix: u16,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct TermRecord {
    coef: String,
    word: WordRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct ElementRecord {
    p: u32,
    format: String,
    terms: Vec<TermRecord>,
}

const WORD_FORMAT: &str = "t^shift * M(matrix) * lamps * torsion";

impl Serialize for GroupRingElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRecord {
            p: self.p,
            format: WORD_FORMAT.into(),
            terms: self
                .terms
                .iter()
                .map(|(w, c)| TermRecord {
                    coef: to_fraction_string(c),
                    word: WordRecord {
                        lamps: w.abelian.lamps.iter().map(|(&i, &v)| (i, v)).collect(),
                        shift: w.gamma.shift,
                        torsion: w.abelian.torsion.bits(),
                        matrix: w.gamma.mat.bits(),
                    },
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupRingElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = ElementRecord::deserialize(d)?;
        let mut terms = BTreeMap::new();
        for t in r.terms {
            let coef = parse_fraction(&t.coef)
                .ok_or_else(|| D::Error::custom(format!("bad coefficient {}", t.coef)))?;
            let mat = Automorphism::from_bits(t.word.matrix)
                .ok_or_else(|| D::Error::custom(format!("singular matrix {}", t.word.matrix)))?;
            let torsion = Vec3::new(t.word.torsion)
                .ok_or_else(|| D::Error::custom(format!("bad torsion {}", t.word.torsion)))?;
            if t.word.lamps.iter().any(|&(_, v)| v == 0 || v >= r.p) {
                return Err(D::Error::custom("lamp value outside 1..p"));
            }
            let word = Word {
                gamma: GammaElement::new(t.word.shift, mat),
                abelian: AbelianWord {
                    lamps: t.word.lamps.into_iter().collect(),
                    torsion,
                },
            };
            terms.insert(word, coef);
        }
        Ok(GroupRingElement { p: r.p, terms })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub p: u32,
    pub seed: u64,
    pub exported_terms: usize,
    /// Distinct coefficients of the export, all exact rationals.
    pub distinct_coefficients: Vec<String>,
    pub idempotents_ok: bool,
    pub round_trip_points: usize,
    pub round_trip_failures: usize,
    pub first_round_trip_failure: Option<String>,
    pub trace_trials: usize,
    pub trace_failures: usize,
    pub scaling_checks: Vec<ScalingCheck>,
}

impl DualityReport {
    pub fn ok(&self) -> bool {
        self.idempotents_ok
            && self.round_trip_failures == 0
            && self.trace_failures == 0
            && self.scaling_checks.iter().all(|c| c.holds)
    }
}

/// `σ_j² = σ_j`, `(1-σ_j)² = 1-σ_j`, `δ_v² = δ_v` and `Σ_v δ_v = 1`.
pub fn idempotent_laws(p: u32) -> bool {
    let s = sigma(p, 3);
    let c = s.one_minus();
    let mut total = AbelianElement {
        p,
        terms: BTreeMap::new(),
    };
    let mut ok = s.mul(&s) == s && c.mul(&c) == c && s.mul(&c).terms.is_empty();
    for v in Vec3::all() {
        let d = label_delta(p, v);
        ok &= d.mul(&d) == d;
        for (w, x) in d.terms {
            *total.terms.entry(w).or_insert_with(Rational::zero) += x;
        }
    }
    total.terms.retain(|_, c| !c.is_zero());
    ok && total == AbelianElement::one(p)
}

fn random_element(rng: &mut ChaCha8Rng, order: usize, support: usize) -> GroupAlgebraElement {
    let mut out = GroupAlgebraElement::new();
    for _ in 0..support {
        let g = rng.gen_range(0..order);
        let c = rat(rng.gen_range(-9..=9), rng.gen_range(1..=6));
        *out.entry(g).or_insert_with(Rational::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityConfig {
    pub p: u32,
    pub seed: u64,
    pub points: usize,
    pub trace_trials: usize,
    pub scaling_max_n: usize,
    pub scaling_trials: usize,
}

impl Default for DualityConfig {
    fn default() -> Self {
        DualityConfig {
            p: 2,
            seed: 0,
            points: 1000,
            trace_trials: 100,
            scaling_max_n: 8,
            scaling_trials: 20,
        }
    }
}

/// Exports `t` and runs every exact check: idempotents, round trip at
/// random points, the trace identity on the 1344-element group and the
/// scaling identity on `Z/n x Z/2`.
pub fn verify_duality(t: &CPElement, cfg: &DualityConfig) -> Result<(GroupRingElement, DualityReport)> {
    let p = cfg.p;
    if p < 2 {
        return Err(Error::Domain(format!("p = {p} < 2")));
    }
    let export = export_group_ring(t, p);
    let mut coefficients: Vec<String> = export.terms.values().map(to_fraction_string).collect();
    coefficients.sort();
    coefficients.dedup();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut failures = 0;
    let mut first_failure = None;
    for i in 0..cfg.points {
        let label = Vec3::new(rng.gen_range(0..8)).expect("three bits");
        let x = LazyPoint::random(p, rng.gen(), label);
        let piece = t.piece_of(&x);
        let expected: BTreeMap<GammaElement, Rational> = t
            .term(piece)
            .theta
            .iter()
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, g)| (*g, c.clone()))
            .collect();
        let got = export.evaluate(&x)?;
        if got != expected {
            failures += 1;
            first_failure.get_or_insert_with(|| format!("point {i} in piece {piece}"));
        }
    }

    let h = AffineF2::new();
    let mut trace_failures = 0;
    for _ in 0..cfg.trace_trials {
        let mut theta = random_element(&mut rng, h.order(), 12);
        if rng.gen_bool(0.5) {
            *theta.entry(h.identity()).or_insert_with(Rational::zero) += rat(rng.gen_range(-5..=5), 3);
        }
        let lhs = int(h.order() as i64) * group_trace(&h, &theta);
        if regular_embedding(&h, &theta).trace() != lhs {
            trace_failures += 1;
        }
    }

    let mut scaling_checks = Vec::new();
    for n in 1..=cfg.scaling_max_n {
        for _ in 0..cfg.scaling_trials {
            let support = rng.gen_range(0..=3);
            let theta = random_element(&mut rng, n, support);
            scaling_checks.push(scaling_lemma_check(n, &theta)?);
        }
    }

    let report = DualityReport {
        p,
        seed: cfg.seed,
        exported_terms: export.len(),
        distinct_coefficients: coefficients,
        idempotents_ok: idempotent_laws(p),
        round_trip_points: cfg.points,
        round_trip_failures: failures,
        first_round_trip_failure: first_failure,
        trace_trials: cfg.trace_trials,
        trace_failures,
        scaling_checks,
    };
    Ok((export, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Conventions;
    use crate::operator::{build_s, build_t};

    #[test]
    fn sigma_coefficients_are_one_over_p() {
        for p in [2, 3, 5] {
            let s = sigma(p, 0);
            assert_eq!(s.terms.len(), p as usize);
            assert!(s.terms.values().all(|c| *c == rat(1, p as i64)));
        }
    }

    #[test]
    fn delta_has_eight_signed_terms() {
        let d = label_delta(2, Vec3::new(5).unwrap());
        assert_eq!(d.terms.len(), 8);
        assert!(d.terms.values().all(|c| *c == rat(1, 8) || *c == rat(-1, 8)));
    }

    #[test]
    fn summand_thirteen_word_count() {
        let s = build_s(&Conventions::canonical());
        assert_eq!(export_summand(&s, Piece(13), 2).len(), 32);
    }

    #[test]
    fn idempotents() {
        for p in [2, 3, 4, 5] {
            assert!(idempotent_laws(p));
        }
    }

    #[test]
    fn small_verification_passes() {
        let t = build_t(&build_s(&Conventions::canonical()));
        for p in [2, 3] {
            let cfg = DualityConfig {
                p,
                points: 100,
                trace_trials: 5,
                scaling_max_n: 4,
                scaling_trials: 3,
                ..DualityConfig::default()
            };
            let (export, report) = verify_duality(&t, &cfg).unwrap();
            assert!(report.ok(), "{report:?}");
            let json = serde_json::to_string(&export).unwrap();
            let back: GroupRingElement = serde_json::from_str(&json).unwrap();
            assert_eq!(back, export);
        }
    }
}
