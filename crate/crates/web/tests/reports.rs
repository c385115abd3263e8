use serde_json::Value;

use lampdim_web::{dimension_report, family_graph_report, sample_census_report};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn dimension_matches_core() {
    let r = parse(dimension_report(2, 12, 20).unwrap());
    assert_eq!(r["defect"], "1/128");
    assert_eq!(r["intersect"], false);
    assert!(r["graph_sum"]["decimal"]
        .as_str()
        .unwrap()
        .starts_with("0.73657990"));
    assert!(r["closed_form"]["decimal"]
        .as_str()
        .unwrap()
        .starts_with("0.74439240"));
}

#[test]
fn family_graph_j47_has_two_dim_kernel() {
    let r = parse(family_graph_report("j", 4, 7, 2).unwrap());
    assert_eq!(r["family"], "j(4,7)");
    assert_eq!(r["vertices"].as_array().unwrap().len(), 24);
    assert_eq!(r["kernel_dim"], 2);
    assert_eq!(r["kernel_basis"].as_array().unwrap().len(), 2);
    let edges = r["edges"].as_array().unwrap();
    assert!(edges.len() >= 23);
    assert!(edges
        .iter()
        .all(|e| e["source"].as_u64().unwrap() < 24 && e["target"].as_u64().unwrap() < 24));
    assert!(r["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .all(|v| v["depth"].as_u64().unwrap() < 24));
}

#[test]
fn family_graph_h1_measure() {
    let r = parse(family_graph_report("h", 0, 1, 2).unwrap());
    assert_eq!(r["mu"], "3/128");
    let letters: Vec<&str> = r["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["letter"].as_str().unwrap())
        .collect();
    assert_eq!(letters.len(), 3);
    assert!(letters.contains(&"C"));
}

#[test]
fn sample_census_is_deterministic() {
    let a = sample_census_report(2, 2000, 5).unwrap();
    let b = sample_census_report(2, 2000, 5).unwrap();
    assert_eq!(a, b);
    let r = parse(a);
    assert_eq!(r["samples"], 2000);
    let total: u64 = r["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["count"].as_u64().unwrap())
        .sum();
    assert_eq!(
        total + r["unknown"].as_u64().unwrap() + r["cap_exceeded"].as_u64().unwrap(),
        2000
    );
}
