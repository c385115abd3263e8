//! The four families of finite S-graphs that carry positive measure: their
//! seed cylinders, generated templates, measures and kernel dimensions.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::decomposer::{closure_from_point, TemplateCache};
use crate::dynamics::{Conventions, CoordinateSource, CylinderSet, Fill, LazyPoint, Letter, Symbol};
use crate::error::{Error, Result};
use crate::exact::{geometric_sum, int, moment_sum, rat, rpow, to_decimal, to_fraction_string, Rational};
use crate::operator::{rest_measure_closed_form, CPElement};
use crate::sgraph::{
    check_conditions, has_trivial_automorphisms, induced_operator, is_simply_connected, path_labels,
    verify_flow_lemma, SGraph,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    U,
    G(u32),
    H(u32),
    J(u32, u32),
    Unknown,
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyId::U => write!(f, "u"),
            FamilyId::G(k) => write!(f, "g({k})"),
            FamilyId::H(l) => write!(f, "h({l})"),
            FamilyId::J(k, l) => write!(f, "j({k},{l})"),
            FamilyId::Unknown => write!(f, "unknown"),
        }
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Format(format!("unrecognized family {s:?}"));
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "u" => return Ok(FamilyId::U),
            "unknown" => return Ok(FamilyId::Unknown),
            _ => {}
        }
        let (head, rest) = s.split_at(1);
        let args = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let nums = args
            .split(',')
            .map(|a| a.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let id = match (head, nums.as_slice()) {
            ("g", [k]) => FamilyId::G(*k),
            ("h", [l]) => FamilyId::H(*l),
            ("j", [k, l]) => FamilyId::J(*k, *l),
            _ => return Err(bad()),
        };
        id.validate()?;
        Ok(id)
    }
}

impl Serialize for FamilyId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FamilyId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FamilyId {
    pub fn validate(self) -> Result<()> {
        let ok = match self {
            FamilyId::G(k) => k >= 1,
            FamilyId::H(l) => l >= 1,
            FamilyId::J(k, l) => k >= 1 && l >= 1,
            FamilyId::U | FamilyId::Unknown => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("{self} needs indices at least 1")))
        }
    }

    pub fn is_known(self) -> bool {
        self != FamilyId::Unknown
    }
}

/// Seed pattern with the origin in brackets; `None` for `U` and `Unknown`.
fn seed_pattern(id: FamilyId) -> Option<(String, Letter)> {
    let ones = |n: u32| "1".repeat(n as usize);
    match id {
        FamilyId::G(k) => Some((format!("0{}[1]00", ones(k - 1)), Letter::A)),
        FamilyId::H(l) => Some((format!("00[1]{}0", ones(l - 1)), Letter::C)),
        FamilyId::J(k, l) => Some((format!("0{}[0]{}0", ones(k), ones(l)), Letter::I)),
        FamilyId::U | FamilyId::Unknown => None,
    }
}

/// The cylinder each graph of the family meets in exactly one vertex. For
/// `U` this is the whole `(·, U1)` piece.
pub fn seed_cylinder(id: FamilyId, conv: &Conventions) -> Result<CylinderSet> {
    id.validate()?;
    match id {
        FamilyId::U => Ok(conv.cylinder("", Letter::U1)),
        FamilyId::Unknown => Err(Error::Domain("unknown family has no seed".into())),
        _ => {
            let (pattern, letter) = seed_pattern(id).expect("pattern family");
            CylinderSet::parse(&pattern, conv.labels.torsion(letter))
        }
    }
}

pub fn vertex_count(id: FamilyId) -> Option<usize> {
    match id {
        FamilyId::U => Some(1),
        FamilyId::G(k) => Some(2 * k as usize),
        FamilyId::H(l) => Some(2 * l as usize + 1),
        FamilyId::J(k, l) => Some(2 * (k + l) as usize + 2),
        FamilyId::Unknown => None,
    }
}

/// Kernel dimension of `T^g` asserted by the lemmas.
pub fn expected_kernel_dim(id: FamilyId) -> Option<usize> {
    match id {
        FamilyId::U | FamilyId::H(_) => Some(1),
        FamilyId::G(_) => Some(0),
        FamilyId::J(k, l) => {
            let special = k <= 32 && (1u64 << (k - 1)) - 1 == l as u64;
            Some(if special { 2 } else { 1 })
        }
        FamilyId::Unknown => None,
    }
}

fn alpha_beta(p: u32) -> (Rational, Rational) {
    let p = p as i64;
    (rat(1, p), rat(p - 1, p))
}

/// Total measure of the points lying in graphs of the family.
pub fn mu_closed_form(id: FamilyId, p: u32) -> Option<Rational> {
    if p < 2 || id.validate().is_err() {
        return None;
    }
    let (a, b) = alpha_beta(p);
    let base = rpow(&a, 3) * rat(1, 8);
    Some(match id {
        FamilyId::U => rest_measure_closed_form(p),
        FamilyId::G(k) => int(2 * k as i64) * base * rpow(&b, k as u64),
        FamilyId::H(l) => int(2 * l as i64 + 1) * base * rpow(&b, l as u64),
        FamilyId::J(k, l) => int(2 * (k + l) as i64 + 2) * base * rpow(&b, (k + l) as u64),
        FamilyId::Unknown => return None,
    })
}

/// A point of the seed cylinder: nonzero constraints take the value 1 and
/// every other coordinate is 0.
pub fn seed_point(id: FamilyId, conv: &Conventions, p: u32) -> Result<LazyPoint> {
    let cyl = seed_cylinder(id, conv)?;
    let fixed: HashMap<i64, u32> = cyl
        .constraints()
        .iter()
        .map(|(&i, &s)| (i, u32::from(s == Symbol::NonZero)))
        .collect();
    let source = CoordinateSource::new(p, Fill::Constant(0), fixed);
    Ok(LazyPoint::new(Rc::new(source), cyl.label().vector))
}

/// Closure of the seed point, embedded by translating the seed cylinder
/// along the path labels from the seed vertex.
pub fn template(id: FamilyId, s: &CPElement, conv: &Conventions, cap: usize) -> Result<SGraph> {
    let x = seed_point(id, conv, 2)?;
    let closure = closure_from_point(&x, s, cap)?;
    let seed = seed_cylinder(id, conv)?;
    let labels = path_labels(&closure.graph)?;
    let embedding = labels.iter().map(|g| seed.act(*g, &conv.labels)).collect();
    closure.graph.with_embedding(embedding)
}

/// Every family with `k, l <= max`.
pub fn enumerate(max: u32) -> Vec<FamilyId> {
    let mut out = vec![FamilyId::U];
    out.extend((1..=max).map(FamilyId::G));
    out.extend((1..=max).map(FamilyId::H));
    for k in 1..=max {
        out.extend((1..=max).map(|l| FamilyId::J(k, l)));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbabilityReport {
    pub p: u32,
    pub mu_u: String,
    pub g_total: String,
    pub h_total: String,
    pub j_total: String,
    pub total: String,
    /// `total - 1`, zero when the identity holds.
    pub defect: String,
}

impl ProbabilityReport {
    pub fn ok(&self) -> bool {
        self.defect == "0"
    }
}

/// Sums each family's measure over all indices in closed form.
pub fn family_totals(p: u32) -> Result<[Rational; 4]> {
    if p < 2 {
        return Err(Error::Domain(format!("p = {p} < 2")));
    }
    let (a, b) = alpha_beta(p);
    let base = rpow(&a, 3) * rat(1, 8);
    let s0 = geometric_sum(&b)?;
    let s1 = moment_sum(&Rational::zero(), &b)?;
    let g = &base * int(2) * &s1;
    let h = &base * int(2) * moment_sum(&rat(1, 2), &b)?;
    let j = &base * int(2) * (&s1 * &s0 * int(2) + &s0 * &s0);
    Ok([rest_measure_closed_form(p), g, h, j])
}

pub fn verify_probability_sum(p: u32) -> Result<ProbabilityReport> {
    let [u, g, h, j] = family_totals(p)?;
    let total = &u + &g + &h + &j;
    Ok(ProbabilityReport {
        p,
        mu_u: to_fraction_string(&u),
        g_total: to_fraction_string(&g),
        h_total: to_fraction_string(&h),
        j_total: to_fraction_string(&j),
        defect: to_fraction_string(&(&total - Rational::one())),
        total: to_fraction_string(&total),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub family: FamilyId,
    pub vertices: usize,
    pub mu: String,
    pub mu_decimal: String,
    pub kernel_dim: usize,
}

/// One row per family with `k, l <= max`, using the lemma kernel dimensions.
pub fn census(p: u32, max: u32, digits: usize) -> Vec<CensusRow> {
    enumerate(max)
        .into_iter()
        .map(|id| {
            let mu = mu_closed_form(id, p).expect("known family");
            CensusRow {
                family: id,
                vertices: vertex_count(id).expect("known family"),
                mu_decimal: to_decimal(&mu, digits),
                mu: to_fraction_string(&mu),
                kernel_dim: expected_kernel_dim(id).expect("known family"),
            }
        })
        .collect()
}

/// Outcome of the structural and kernel checks on one template.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateCheck {
    pub family: FamilyId,
    pub vertices: usize,
    pub expected_vertices: usize,
    pub kernel_dim: usize,
    pub expected_kernel_dim: usize,
    pub conditions: Option<String>,
    pub simply_connected: bool,
    pub trivial_automorphisms: bool,
    pub flow_vectors: usize,
    pub flow_failure: Option<String>,
}

impl TemplateCheck {
    pub fn ok(&self) -> bool {
        self.vertices == self.expected_vertices
            && self.kernel_dim == self.expected_kernel_dim
            && self.conditions.is_none()
            && self.simply_connected
            && self.trivial_automorphisms
            && self.flow_failure.is_none()
    }
}

/// Generates the template of `id` and checks it against the lemmas: vertex
/// count, kernel dimension, the S-graph conditions with embedding, simple
/// connectedness, trivial automorphism group and the flow identity on a
/// kernel basis.
pub fn check_template(id: FamilyId, cache: &TemplateCache) -> Result<TemplateCheck> {
    let t = cache.get(id)?;
    let g = &t.graph;
    let op = induced_operator(g, cache.t())?;
    let basis = op.kernel_basis();
    let flow_failure = basis.iter().enumerate().find_map(|(i, v)| {
        verify_flow_lemma(g, cache.s(), cache.t(), v)
            .err()
            .map(|e| format!("basis vector {i}: {e}"))
    });
    Ok(TemplateCheck {
        family: id,
        vertices: g.vertex_count(),
        expected_vertices: vertex_count(id).ok_or_else(|| Error::Domain("unknown family".into()))?,
        kernel_dim: op.kernel_dimension(),
        expected_kernel_dim: expected_kernel_dim(id).expect("known family"),
        conditions: check_conditions(g, cache.s(), cache.conventions())
            .err()
            .map(|e| e.to_string()),
        simply_connected: is_simply_connected(g)?,
        trivial_automorphisms: has_trivial_automorphisms(g),
        flow_vectors: basis.len(),
        flow_failure,
    })
}

/// `j(k,l)` for `k <= kmax` and `l` in `{2^{k-1}-2, 2^{k-1}-1, 2^{k-1}}`,
/// keeping `l >= 1`: the cases either side of the kernel jump.
pub fn dichotomy_families(kmax: u32) -> Vec<FamilyId> {
    let mut out = Vec::new();
    for k in 1..=kmax.min(31) {
        let centre = 1i64 << (k - 1);
        for l in [centre - 2, centre - 1, centre] {
            if l >= 1 {
                out.push(FamilyId::J(k, l as u32));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Symbol::{NonZero, Zero as Z};

    fn constraints(c: &CylinderSet) -> Vec<(i64, Symbol)> {
        c.constraints().iter().map(|(&i, &s)| (i, s)).collect()
    }

    #[test]
    fn seed_examples() {
        let conv = Conventions::canonical();
        let g2 = seed_cylinder(FamilyId::G(2), &conv).unwrap();
        assert_eq!(
            constraints(&g2),
            vec![(-2, Z), (-1, NonZero), (0, NonZero), (1, Z), (2, Z)]
        );
        assert_eq!(g2.label().letter, Letter::A);
        let h3 = seed_cylinder(FamilyId::H(3), &conv).unwrap();
        assert_eq!(
            constraints(&h3),
            vec![(-2, Z), (-1, Z), (0, NonZero), (1, NonZero), (2, NonZero), (3, Z)]
        );
        let j11 = seed_cylinder(FamilyId::J(1, 1), &conv).unwrap();
        assert_eq!(
            constraints(&j11),
            vec![(-2, Z), (-1, NonZero), (0, Z), (1, NonZero), (2, Z)]
        );
        assert_eq!(j11.label().letter, Letter::I);
    }

    #[test]
    fn measure_examples() {
        assert_eq!(mu_closed_form(FamilyId::U, 2).unwrap(), rat(45, 64));
        assert_eq!(mu_closed_form(FamilyId::G(2), 2).unwrap(), rat(1, 64));
        assert_eq!(mu_closed_form(FamilyId::J(1, 1), 2).unwrap(), rat(3, 128));
        assert_eq!(mu_closed_form(FamilyId::H(1), 2).unwrap(), rat(3, 128));
        assert_eq!(mu_closed_form(FamilyId::G(0), 2), None);
    }

    #[test]
    fn kernel_dim_examples() {
        assert_eq!(expected_kernel_dim(FamilyId::G(7)), Some(0));
        assert_eq!(expected_kernel_dim(FamilyId::J(3, 3)), Some(2));
        assert_eq!(expected_kernel_dim(FamilyId::J(3, 4)), Some(1));
        assert_eq!(expected_kernel_dim(FamilyId::J(4, 7)), Some(2));
    }

    #[test]
    fn g_family_total_at_two() {
        let [_, g, _, _] = family_totals(2).unwrap();
        assert_eq!(g, rat(1, 16));
    }

    #[test]
    fn probability_sum_is_one() {
        for p in 2..=10 {
            let r = verify_probability_sum(p).unwrap();
            assert!(r.ok(), "{r:?}");
        }
    }

    #[test]
    fn family_ids_parse_back() {
        for id in enumerate(3) {
            assert_eq!(id.to_string().parse::<FamilyId>().unwrap(), id);
        }
        assert!("g(0)".parse::<FamilyId>().is_err());
        assert!("k(1)".parse::<FamilyId>().is_err());
    }
}
