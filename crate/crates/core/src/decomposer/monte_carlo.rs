use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{classify, closure_from_point, TemplateCache, DEFAULT_CAP};
use crate::dynamics::{LabelAssignment, LazyPoint, Letter};
use crate::error::{Error, Result};
use crate::exact::{int, rat, to_f64, to_fraction_string, Rational};
use crate::families::{mu_closed_form, FamilyId};
use crate::sgraph::{check_conditions, has_trivial_automorphisms, induced_operator, is_simply_connected};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    pub p: u32,
    pub samples: u64,
    pub seed: u64,
    pub cap: usize,
    /// Run the structural checks on every sampled graph.
    pub check_hypotheses: bool,
    /// Thread count; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        MonteCarloConfig {
            p: 2,
            samples: 1_000_000,
            seed: 0,
            cap: DEFAULT_CAP,
            check_hypotheses: true,
            workers: None,
        }
    }
}

/// Sample `index` of the stream keyed by `master`: a label drawn uniformly
/// from the eight letters and a fresh coordinate sequence. Letters are drawn
/// by position, so the same index gives the same letter under any
/// assignment.
pub fn sample_point(p: u32, master: u64, index: u64, labels: &LabelAssignment) -> LazyPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    let letter = Letter::ALL[rng.gen_range(0..8)];
    let coordinates: u64 = rng.gen();
    LazyPoint::random(p, coordinates, labels.vector(letter))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleOutcome {
    pub family: FamilyId,
    pub vertices: usize,
    pub kernel_dim: usize,
    pub hypothesis_failure: Option<String>,
}

/// Closes and classifies sample `index`.
pub fn sample_outcome(cfg: &MonteCarloConfig, cache: &TemplateCache, index: u64) -> Result<SampleOutcome> {
    let x = sample_point(cfg.p, cfg.seed, index, &cache.conventions().labels);
    let closure = closure_from_point(&x, cache.s(), cfg.cap)?;
    let g = &closure.graph;
    let family = classify(g, cache)?;
    let kernel_dim = match family {
        FamilyId::Unknown => induced_operator(g, cache.t())?.kernel_dimension(),
        id => cache.get(id)?.kernel_dim,
    };
    let hypothesis_failure = if cfg.check_hypotheses {
        if let Err(e) = check_conditions(g, cache.s(), cache.conventions()) {
            Some(e.to_string())
        } else if !is_simply_connected(g)? {
            Some("not simply connected".into())
        } else if !has_trivial_automorphisms(g) {
            Some("non-trivial automorphism".into())
        } else {
            None
        }
    } else {
        None
    };
    Ok(SampleOutcome {
        family,
        vertices: g.vertex_count(),
        kernel_dim,
        hypothesis_failure,
    })
}

#[derive(Clone, Debug, Default)]
struct Tally {
    families: BTreeMap<FamilyId, u64>,
    /// Count per `(kernel dimension, vertex count)`.
    dims: BTreeMap<(usize, usize), u64>,
    cap_exceeded: u64,
    hypotheses_checked: u64,
    hypothesis_failures: u64,
    first_failure: Option<(u64, String)>,
    error: Option<(u64, String)>,
}

fn earliest(a: Option<(u64, String)>, b: Option<(u64, String)>) -> Option<(u64, String)> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Tally {
    fn add(mut self, index: u64, outcome: Result<SampleOutcome>, checked: bool) -> Self {
        match outcome {
            Ok(o) => {
                *self.families.entry(o.family).or_default() += 1;
                *self.dims.entry((o.kernel_dim, o.vertices)).or_default() += 1;
                if checked {
                    self.hypotheses_checked += 1;
                }
                if let Some(why) = o.hypothesis_failure {
                    self.hypothesis_failures += 1;
                    self.first_failure = earliest(self.first_failure, Some((index, why)));
                }
            }
            Err(Error::CapExceeded { .. }) => self.cap_exceeded += 1,
            Err(e) => self.error = earliest(self.error, Some((index, e.to_string()))),
        }
        self
    }

    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    fn merge(mut self, other: Tally) -> Tally {
        for (k, v) in other.families {
            *self.families.entry(k).or_default() += v;
        }
        for (k, v) in other.dims {
            *self.dims.entry(k).or_default() += v;
        }
        self.cap_exceeded += other.cap_exceeded;
        self.hypotheses_checked += other.hypotheses_checked;
        self.hypothesis_failures += other.hypothesis_failures;
        self.first_failure = earliest(self.first_failure, other.first_failure);
        self.error = earliest(self.error, other.error);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRow {
    pub family: FamilyId,
    pub count: u64,
    pub frequency: f64,
    pub expected: Option<String>,
    pub expected_decimal: Option<f64>,
    pub std_error: Option<f64>,
    /// `(frequency - expected) / std_error`.
    pub z: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyReport {
    pub p: u32,
    pub samples: u64,
    pub seed: u64,
    pub cap: usize,
    pub rows: Vec<ClassRow>,
    pub unknown: u64,
    pub cap_exceeded: u64,
    pub hypotheses_checked: u64,
    pub hypothesis_failures: u64,
    pub first_hypothesis_failure: Option<String>,
    /// Mean of `dim ker T^g / |V(g)|` over the sampled graphs, exact.
    pub empirical_dimension: String,
    pub empirical_dimension_decimal: f64,
    pub dimension_std_error: f64,
}

impl FrequencyReport {
    /// Largest `|z|` among classes with expected measure at least `min_mu`.
    pub fn worst_deviation(&self, min_mu: f64) -> Option<(FamilyId, f64)> {
        self.rows
            .iter()
            .filter(|r| r.expected_decimal.is_some_and(|m| m >= min_mu))
            .filter_map(|r| r.z.map(|z| (r.family, z.abs())))
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }

    pub fn passes(&self, min_mu: f64, sigmas: f64) -> bool {
        self.cap_exceeded == 0 && self.worst_deviation(min_mu).is_none_or(|(_, z)| z <= sigmas)
    }

    pub fn row(&self, id: FamilyId) -> Option<&ClassRow> {
        self.rows.iter().find(|r| r.family == id)
    }
}

/// Families whose measure at `p` is at least `min_mu`.
pub fn significant_families(p: u32, min_mu: f64) -> Vec<FamilyId> {
    let approx = |id| to_f64(&mu_closed_form(id, p).expect("known family"));
    let mut out = vec![FamilyId::U];
    let beta = (p as f64 - 1.0) / p as f64;
    let alpha3 = (p as f64).powi(-3);
    // Measures are bounded by (2n+2)/8 α³ β^n in the index sum n.
    let limit = (1..400).find(|&n| (2 * n + 2) as f64 / 8.0 * alpha3 * beta.powi(n) < min_mu * 1e-3);
    let limit = limit.unwrap_or(400) as u32;
    for k in 1..=limit {
        for id in [FamilyId::G(k), FamilyId::H(k)] {
            if approx(id) >= min_mu {
                out.push(id);
            }
        }
        for l in 1..=limit.saturating_sub(k) {
            if approx(FamilyId::J(k, l)) >= min_mu {
                out.push(FamilyId::J(k, l));
            }
        }
    }
    out
}

fn run_tally(cfg: &MonteCarloConfig, cache: &TemplateCache) -> Tally {
    let checked = cfg.check_hypotheses;
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let work = || {
            (0..cfg.samples)
                .into_par_iter()
                .fold(Tally::default, |t, i| {
                    t.add(i, sample_outcome(cfg, cache, i), checked)
                })
                .reduce(Tally::default, Tally::merge)
        };
        match cfg.workers {
            Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(work),
                Err(_) => work(),
            },
            None => work(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..cfg.samples).fold(Tally::default(), |t, i| {
            t.add(i, sample_outcome(cfg, cache, i), checked)
        })
    }
}

/// Draws `cfg.samples` points, closes and classifies each, and compares
/// class frequencies with the exact family measures. The result depends
/// only on `cfg`, not on the worker count.
pub fn monte_carlo(cfg: &MonteCarloConfig, cache: &TemplateCache) -> Result<FrequencyReport> {
    if cfg.samples == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    if cfg.p < 2 {
        return Err(Error::Domain(format!("p = {} < 2", cfg.p)));
    }
    let tally = run_tally(cfg, cache);
    if let Some((index, e)) = tally.error {
        return Err(Error::Condition(format!("sample {index}: {e}")));
    }

    let n = cfg.samples as f64;
    let mut ids: Vec<FamilyId> = significant_families(cfg.p, 1e-4);
    ids.extend(tally.families.keys().copied());
    ids.sort();
    ids.dedup();
    let rows = ids
        .into_iter()
        .map(|id| {
            let count = tally.families.get(&id).copied().unwrap_or(0);
            let frequency = count as f64 / n;
            let mu = mu_closed_form(id, cfg.p);
            let expected_decimal = mu.as_ref().map(to_f64);
            let std_error = expected_decimal.map(|m| (m * (1.0 - m) / n).sqrt());
            let z = match (expected_decimal, std_error) {
                (Some(m), Some(se)) if se > 0.0 => Some((frequency - m) / se),
                _ => None,
            };
            ClassRow {
                family: id,
                count,
                frequency,
                expected: mu.as_ref().map(to_fraction_string),
                expected_decimal,
                std_error,
                z,
            }
        })
        .collect();

    let good: u64 = tally.dims.values().sum();
    let mut sum = Rational::zero();
    let mut sum_sq = Rational::zero();
    for (&(d, v), &c) in &tally.dims {
        let x = rat(d as i64, v as i64);
        sum += int(c as i64) * &x;
        sum_sq += int(c as i64) * &x * &x;
    }
    let mean = if good > 0 {
        sum / int(good as i64)
    } else {
        Rational::zero()
    };
    let variance = if good > 0 {
        to_f64(&(sum_sq / int(good as i64) - &mean * &mean))
    } else {
        0.0
    };

    Ok(FrequencyReport {
        p: cfg.p,
        samples: cfg.samples,
        seed: cfg.seed,
        cap: cfg.cap,
        rows,
        unknown: tally.families.get(&FamilyId::Unknown).copied().unwrap_or(0),
        cap_exceeded: tally.cap_exceeded,
        hypotheses_checked: tally.hypotheses_checked,
        hypothesis_failures: tally.hypothesis_failures,
        first_hypothesis_failure: tally.first_failure.map(|(i, why)| format!("sample {i}: {why}")),
        empirical_dimension: to_fraction_string(&mean),
        empirical_dimension_decimal: to_f64(&mean),
        dimension_std_error: (variance.max(0.0) / good.max(1) as f64).sqrt(),
    })
}
