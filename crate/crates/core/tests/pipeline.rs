use num_bigint::BigInt;

use lampdim::decomposer::{monte_carlo, MonteCarloConfig, TemplateCache};
use lampdim::dimension::{closed_form_dimension, cross_check, graph_sum_dimension};
use lampdim::dynamics::Conventions;
use lampdim::exact::{parse_fraction, to_f64, Rational};
use lampdim::families::FamilyId;
use lampdim::sgraph::{isomorphic, SGraph};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn monte_carlo_ignores_thread_count() {
    let cache = TemplateCache::new(Conventions::canonical());
    let cfg = |workers| MonteCarloConfig {
        samples: 4000,
        seed: 3,
        workers,
        ..MonteCarloConfig::default()
    };
    let a = monte_carlo(&cfg(Some(1)), &cache).unwrap();
    let b = monte_carlo(&cfg(Some(4)), &cache).unwrap();
    let c = monte_carlo(&cfg(None), &cache).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn template_json_round_trip() {
    let cache = TemplateCache::new(Conventions::canonical());
    for id in [FamilyId::U, FamilyId::G(3), FamilyId::H(2), FamilyId::J(3, 3)] {
        let g = &cache.get(id).unwrap().graph;
        let text = serde_json::to_string(g).unwrap();
        let back: SGraph = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, g);
        assert!(isomorphic(&back, g));
    }
}

/// The two enclosures differ by exactly the `k = 1` lacunary term,
/// `β²/(8p²(p-1))`, for every `p`.
#[test]
fn cross_check_defect_is_the_k1_term() {
    for p in 2..=10i64 {
        let c = cross_check(p as u32, 20, 25).unwrap();
        let beta = rat(p - 1, p);
        let expected = &beta * &beta * rat(1, 8 * p * p * (p - 1));
        assert_eq!(parse_fraction(&c.defect).unwrap(), expected, "p = {p}");
        assert!(!c.intersect);
        assert!(c.defect_explained);
        assert_eq!(c.unmatched_terms, vec![1]);
    }
}

#[test]
fn enclosures_nest_as_kmax_grows() {
    for p in [2u32, 3, 7] {
        let coarse = graph_sum_dimension(p, 3, 20).unwrap();
        let fine = graph_sum_dimension(p, 40, 20).unwrap();
        assert!(coarse.enclosure.lo() <= fine.enclosure.lo());
        assert!(fine.enclosure.hi() <= coarse.enclosure.hi());
        let closed = closed_form_dimension(p, 40, 20).unwrap();
        assert_eq!(closed.head, fine.head);
    }
}

/// Sampled `dim ker / |V|` averages to the graph sum within five standard
/// errors at `p = 3`.
#[test]
fn empirical_dimension_tracks_graph_sum() {
    let cache = TemplateCache::new(Conventions::canonical());
    let cfg = MonteCarloConfig {
        p: 3,
        samples: 100_000,
        seed: 1,
        ..MonteCarloConfig::default()
    };
    let r = monte_carlo(&cfg, &cache).unwrap();
    let g = to_f64(graph_sum_dimension(3, 40, 20).unwrap().enclosure.lo());
    let z = (r.empirical_dimension_decimal - g) / r.dimension_std_error;
    assert!(z.abs() < 5.0, "z = {z}");
    assert_eq!(r.hypothesis_failures, 0);
    assert_eq!(r.cap_exceeded, 0);
}
