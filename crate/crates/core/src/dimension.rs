//! `dim_vN ker T` two ways: summed over the S-graph families with the
//! lemma kernel dimensions, and from the closed form with the lacunary
//! series `Σ β^{k + 2^{k-1}}`. Both are exact rational enclosures.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    geometric_sum, int, rat, rpow, to_decimal, to_fraction_string, IntervalRecord, Rational, RationalInterval,
};
use crate::families::{expected_kernel_dim, FamilyId};
use crate::operator::rest_measure_closed_form;

pub const DEFAULT_KMAX: u32 = 40;
pub const DEFAULT_DIGITS: usize = 30;

/// Exponent of the `k`-th lacunary term, `k + 2^{k-1}`; `None` past `u64`.
pub fn lacunary_exponent(k: u32) -> Option<u64> {
    if k == 0 || k > 64 {
        return None;
    }
    (1u64 << (k - 1)).checked_add(k as u64)
}

/// Smallest `n >= 64` with `β^n / (1-β) < 10^-(digits + 10)`. Terms of the
/// lacunary series beyond this exponent are folded into the tail bound
/// rather than expanded, since `β^{2^{k-1}}` has about `2^{k-1} log2 p`
/// bits.
pub fn exponent_budget(p: u32, digits: usize) -> u64 {
    let beta = (p as f64 - 1.0) / p as f64;
    let want = (digits as f64 + 10.0) * std::f64::consts::LN_10 + (p as f64).ln();
    let n = (want / -beta.ln()).ceil() as u64 + 8;
    n.max(64)
}

/// Partial sum of `Σ_{k >= from} β^{e_k}` over `k <= kmax` together with the
/// tail bound for the omitted terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LacunaryPart {
    pub enclosure: RationalInterval,
    /// Indices actually expanded.
    pub terms: Vec<u32>,
    /// `n` with tail `<= β^n/(1-β)`.
    pub tail_exponent: u64,
}

fn lacunary_from(p: u32, from: u32, kmax: u32, budget: u64) -> Result<LacunaryPart> {
    if p < 2 {
        return Err(Error::Domain(format!("p = {p} < 2")));
    }
    if kmax < 1 {
        return Err(Error::Domain("Kmax must be at least 1".into()));
    }
    let beta = rat(p as i64 - 1, p as i64);
    let mut sum = Rational::zero();
    let mut terms = Vec::new();
    let mut k = from;
    while k <= kmax {
        match lacunary_exponent(k) {
            Some(e) if e <= budget => {
                sum += rpow(&beta, e);
                terms.push(k);
                k += 1;
            }
            _ => break,
        }
    }
    // The omitted exponents start at e_k and are strictly increasing, so
    // they are dominated by the geometric series from e_k on.
    let tail_exponent = match lacunary_exponent(k) {
        Some(e) if e <= 2 * budget => e,
        _ => budget + 1,
    };
    let tail = rpow(&beta, tail_exponent) / (Rational::one() - &beta);
    Ok(LacunaryPart {
        enclosure: RationalInterval::with_upper_slack(sum, &tail)?,
        terms,
        tail_exponent,
    })
}

/// `Σ_{k=1}^{∞} β^{k + 2^{k-1}}` enclosed by its first `kmax` terms.
pub fn lacunary_series(p: u32, kmax: u32) -> Result<RationalInterval> {
    Ok(lacunary_from(p, 1, kmax, exponent_budget(p, DEFAULT_DIGITS))?.enclosure)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    GraphSum,
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionResult {
    pub p: u32,
    pub kmax: u32,
    pub method: Method,
    /// Rational part, without the lacunary series.
    pub head: Rational,
    pub enclosure: RationalInterval,
    /// Per-class totals; the truncated class is reported by its partial sum.
    pub contributions: BTreeMap<String, Rational>,
    pub lacunary_terms: Vec<u32>,
    pub tail_exponent: u64,
    pub digits: usize,
}

impl DimensionResult {
    /// Lower endpoint truncated to `digits` places.
    pub fn decimal(&self) -> String {
        to_decimal(self.enclosure.lo(), self.digits)
    }

    /// Decimal places on which both endpoints agree.
    pub fn certified_digits(&self) -> usize {
        self.enclosure.agreeing_digits(self.digits)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct DimensionRecord {
    p: u32,
    kmax: u32,
    method: Method,
    head: String,
    enclosure: IntervalRecord,
    width: String,
    decimal: String,
    certified_digits: usize,
    contributions: BTreeMap<String, String>,
    lacunary_terms: Vec<u32>,
    tail_exponent: u64,
}

impl Serialize for DimensionResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DimensionRecord {
            p: self.p,
            kmax: self.kmax,
            method: self.method,
            head: to_fraction_string(&self.head),
            enclosure: (&self.enclosure).into(),
            width: to_decimal(&self.enclosure.width(), self.digits + 10),
            decimal: self.decimal(),
            certified_digits: self.certified_digits(),
            contributions: self
                .contributions
                .iter()
                .map(|(k, v)| (k.clone(), to_fraction_string(v)))
                .collect(),
            lacunary_terms: self.lacunary_terms.clone(),
            tail_exponent: self.tail_exponent,
        }
        .serialize(s)
    }
}

fn alpha_beta(p: u32) -> (Rational, Rational) {
    (rat(1, p as i64), rat(p as i64 - 1, p as i64))
}

/// `(4p³ + 3p² + 2p - 1) / (8p³)`.
pub fn closed_form_head(p: u32) -> Rational {
    let q = p as i64;
    rat(4 * q * q * q + 3 * q * q + 2 * q - 1, 8 * q * q * q)
}

/// `1 / (8p²(p-1))`.
pub fn lacunary_coefficient(p: u32) -> Rational {
    let q = p as i64;
    rat(1, 8 * q * q * (q - 1))
}

/// The displayed closed form: head plus coefficient times the lacunary
/// series from `k = 1`.
pub fn closed_form_dimension(p: u32, kmax: u32, digits: usize) -> Result<DimensionResult> {
    let part = lacunary_from(p, 1, kmax, exponent_budget(p, digits))?;
    let head = closed_form_head(p);
    let c = lacunary_coefficient(p);
    let series = part.enclosure.scale(&c)?;
    let mut contributions = BTreeMap::new();
    contributions.insert("head".to_string(), head.clone());
    contributions.insert("lacunary".to_string(), series.lo().clone());
    Ok(DimensionResult {
        p,
        kmax,
        method: Method::ClosedForm,
        enclosure: series.shift(&head),
        head,
        contributions,
        lacunary_terms: part.terms,
        tail_exponent: part.tail_exponent,
        digits,
    })
}

/// First `k` whose special partner `l = 2^{k-1} - 1` is a valid index.
fn first_special_k() -> u32 {
    (1..=64)
        .find(|&k| {
            let l = (1u64 << (k - 1)) - 1;
            l >= 1 && l <= u32::MAX as u64 && expected_kernel_dim(FamilyId::J(k, l as u32)) == Some(2)
        })
        .expect("some k has a special partner")
}

/// `Σ_g μ(g)/|V(g)| · dim ker T^g` over the families `u`, `g(k)`, `h(l)`,
/// `j(k,l)` with the lemma kernel dimensions. Whole families sum in closed
/// form; only the `j(k, 2^{k-1}-1)` excess is truncated at `kmax`.
pub fn graph_sum_dimension(p: u32, kmax: u32, digits: usize) -> Result<DimensionResult> {
    if p < 2 {
        return Err(Error::Domain(format!("p = {p} < 2")));
    }
    if kmax < 1 {
        return Err(Error::Domain("Kmax must be at least 1".into()));
    }
    let (a, b) = alpha_beta(p);
    let base = rpow(&a, 3) * rat(1, 8);
    let s0 = geometric_sum(&b)?;
    let dim = |id| int(expected_kernel_dim(id).expect("known family") as i64);

    // Measure of a family divided by its vertex count is the seed measure
    // (1/8) α³ β^n, so each class below is a sum of seed measures.
    let u = rest_measure_closed_form(p) * dim(FamilyId::U);
    let g = &base * &s0 * dim(FamilyId::G(1));
    let h = &base * &s0 * dim(FamilyId::H(1));
    let j_generic = &base * &s0 * &s0 * dim(FamilyId::J(1, 1));

    // j(k, 2^{k-1}-1) carries one extra dimension, with seed measure
    // (1/8) α³ β^{k + 2^{k-1} - 1}.
    let from = first_special_k();
    let extra_coef = &base / &b;
    let part = lacunary_from(p, from, kmax, exponent_budget(p, digits))?;
    let extra = part.enclosure.scale(&extra_coef)?;

    let head = &u + &g + &h + &j_generic;
    let mut contributions = BTreeMap::new();
    contributions.insert("u".to_string(), u);
    contributions.insert("g".to_string(), g);
    contributions.insert("h".to_string(), h);
    contributions.insert("j".to_string(), j_generic);
    contributions.insert("j-special".to_string(), extra.lo().clone());
    Ok(DimensionResult {
        p,
        kmax,
        method: Method::GraphSum,
        enclosure: extra.shift(&head),
        head,
        contributions,
        lacunary_terms: part.terms,
        tail_exponent: part.tail_exponent,
        digits,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub p: u32,
    pub kmax: u32,
    pub graph_sum: DimensionResult,
    pub closed_form: DimensionResult,
    pub intersect: bool,
    /// Closed-form minus graph-sum lower endpoints, exact.
    pub defect: String,
    /// Closed-form lacunary terms with no graph family behind them.
    pub unmatched_terms: Vec<u32>,
    /// Sum of those terms times the lacunary coefficient.
    pub unmatched_mass: String,
    /// The defect is exactly the unmatched mass.
    pub defect_explained: bool,
}

impl CrossCheck {
    pub fn ok(&self) -> bool {
        self.intersect && self.defect == "0"
    }
}

pub fn cross_check(p: u32, kmax: u32, digits: usize) -> Result<CrossCheck> {
    let gs = graph_sum_dimension(p, kmax, digits)?;
    let cf = closed_form_dimension(p, kmax, digits)?;
    let defect = cf.enclosure.lo() - gs.enclosure.lo();
    let unmatched: Vec<u32> = cf
        .lacunary_terms
        .iter()
        .copied()
        .filter(|k| !gs.lacunary_terms.contains(k))
        .collect();
    let (_, b) = alpha_beta(p);
    let unmatched_mass = unmatched.iter().fold(Rational::zero(), |acc, &k| {
        acc + rpow(&b, lacunary_exponent(k).expect("expanded term"))
    }) * lacunary_coefficient(p);
    Ok(CrossCheck {
        p,
        kmax,
        intersect: gs.enclosure.intersects(&cf.enclosure),
        defect: to_fraction_string(&defect),
        unmatched_terms: unmatched,
        defect_explained: defect == unmatched_mass,
        unmatched_mass: to_fraction_string(&unmatched_mass),
        graph_sum: gs,
        closed_form: cf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heads() {
        assert_eq!(closed_form_head(2), rat(47, 64));
        assert_eq!(closed_form_head(3), rat(35, 54));
    }

    #[test]
    fn lacunary_small_cases() {
        let five = lacunary_series(2, 5).unwrap();
        let partial = [2u64, 4, 7, 12, 21]
            .iter()
            .fold(Rational::zero(), |acc, &e| acc + rpow(&rat(1, 2), e));
        assert_eq!(five.lo(), &partial);
        assert_eq!(five.width(), rpow(&rat(1, 2), 38) * int(2));

        for p in [2, 3, 7] {
            let b = rat(p as i64 - 1, p as i64);
            let one = lacunary_series(p, 1).unwrap();
            assert_eq!(one.lo(), &rpow(&b, 2));
            assert_eq!(one.width(), rpow(&b, 4) / (Rational::one() - &b));
            let loose =
                RationalInterval::with_upper_slack(rpow(&b, 2), &(rpow(&b, 3) / (Rational::one() - &b)))
                    .unwrap();
            assert!(one.is_within(&loose));
        }
    }

    #[test]
    fn g_family_contributes_nothing() {
        for p in [2, 3, 5] {
            let r = graph_sum_dimension(p, 5, 30).unwrap();
            assert!(r.contributions["g"].is_zero());
        }
    }

    #[test]
    fn h_family_at_two() {
        let r = graph_sum_dimension(2, 5, 30).unwrap();
        assert_eq!(r.contributions["h"], rat(1, 64));
    }

    #[test]
    fn enclosures_nest_as_kmax_grows() {
        for p in [2, 3] {
            for k in 1..12 {
                let a = closed_form_dimension(p, k, 30).unwrap();
                let b = closed_form_dimension(p, k + 1, 30).unwrap();
                assert!(b.enclosure.is_within(&a.enclosure), "p={p} k={k}");
                let a = graph_sum_dimension(p, k, 30).unwrap();
                let b = graph_sum_dimension(p, k + 1, 30).unwrap();
                assert!(b.enclosure.is_within(&a.enclosure), "p={p} k={k}");
            }
        }
    }

    #[test]
    fn kmax_forty_is_narrow() {
        for p in [2, 3] {
            let r = closed_form_dimension(p, 40, 30).unwrap();
            assert!(r.enclosure.width() < rpow(&rat(1, 2), 80));
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(graph_sum_dimension(2, 0, 30).is_err());
        assert!(closed_form_dimension(1, 5, 30).is_err());
    }
}
