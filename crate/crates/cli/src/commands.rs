use std::collections::BTreeSet;
use std::path::PathBuf;

use anyhow::Context;
use serde::Serialize;
use serde_json::{json, Value};

use lampdim::decomposer::{monte_carlo, MonteCarloConfig, TemplateCache};
use lampdim::dimension::{cross_check, DimensionResult};
use lampdim::duality::{verify_duality, DualityConfig};
use lampdim::dynamics::{Conventions, GammaElement};
use lampdim::exact::{int, to_f64};
use lampdim::families::{
    census, check_template, dichotomy_families, enumerate, mu_closed_form, seed_cylinder,
    verify_probability_sum, vertex_count, FamilyId,
};
use lampdim::operator::{build_s, build_t, verify_partition, CPElement, Piece};

use crate::config::{Command, RunConfig};

pub struct Outcome {
    pub pass: bool,
    pub json: Value,
    pub csv: Option<String>,
    /// Where the report goes, if not stdout.
    pub report_path: Option<PathBuf>,
    pub detail: Option<String>,
}

impl Outcome {
    fn new(pass: bool, json: Value, csv: Option<String>, cfg: &RunConfig) -> Self {
        Outcome {
            pass,
            json,
            csv,
            report_path: cfg.out.clone(),
            detail: None,
        }
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        if !self.pass {
            self.detail = Some(d.into());
        }
        self
    }
}

#[derive(Serialize)]
pub struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<String>,
    pass: bool,
    result: &'a Value,
}

pub fn envelope<'a>(command: &'a str, cfg: &'a RunConfig, pass: bool, result: &'a Value) -> Envelope<'a> {
    Envelope {
        tool: "lampdim",
        version: lampdim::VERSION,
        command,
        config: cfg,
        timestamp: (!cfg.no_timestamp).then(|| chrono::Utc::now().to_rfc3339()),
        pass,
        result,
    }
}

pub fn dispatch(command: &Command, cfg: &RunConfig) -> anyhow::Result<Outcome> {
    match command {
        Command::VerifyGraphs => verify_graphs(cfg),
        Command::Measures => measures(cfg),
        Command::MonteCarlo => run_monte_carlo(cfg),
        Command::Dimension => dimension(cfg),
        Command::Export => export(cfg),
        Command::All => all(cfg),
    }
}

/// `S`, or with `--tamper` a copy whose `-2 t^-1` coefficient on piece 6
/// is changed to `-3`.
fn operator_s(cfg: &RunConfig, conv: &Conventions) -> CPElement {
    let s = build_s(conv);
    if cfg.tamper {
        s.with_coefficient(Piece(6), GammaElement::t(-1), int(-3))
    } else {
        s
    }
}

fn cache(cfg: &RunConfig) -> TemplateCache {
    let conv = Conventions::canonical();
    let s = operator_s(cfg, &conv);
    let t = build_t(&s);
    TemplateCache::with_operators(conv, s, t)
}

fn to_csv<R: Serialize>(rows: impl IntoIterator<Item = R>) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn verify_graphs(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let cache = cache(cfg);
    let mut ids: BTreeSet<FamilyId> = enumerate(cfg.graph_max).into_iter().collect();
    ids.extend(dichotomy_families(5));
    ids.insert(FamilyId::J(4, 7));
    let checks = ids
        .iter()
        .map(|&id| check_template(id, &cache).with_context(|| format!("template {id}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let failures: Vec<String> = checks
        .iter()
        .filter(|c| !c.ok())
        .map(|c| c.family.to_string())
        .collect();
    let dichotomy: Vec<Value> = dichotomy_families(5)
        .into_iter()
        .filter_map(|id| checks.iter().find(|c| c.family == id))
        .map(|c| json!({"family": c.family, "kernel_dim": c.kernel_dim, "expected": c.expected_kernel_dim}))
        .collect();
    let pass = failures.is_empty();
    let json = json!({
        "checked": checks.len(),
        "failures": failures,
        "dichotomy": dichotomy,
        "templates": checks,
    });
    let csv = to_csv(&checks)?;
    Ok(Outcome::new(pass, json, Some(csv), cfg).detail(format!("templates failing: {}", failures.join(" "))))
}

fn measures(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let conv = Conventions::canonical();
    let s = operator_s(cfg, &conv);
    let partition = verify_partition(&s, cfg.p);
    let probability = verify_probability_sum(cfg.p)?;
    let rows = census(cfg.p, cfg.graph_max, cfg.precision as usize);

    // mu(family) must equal |V| times the measure of the seed cylinder.
    // U is excluded: its mass is all of the REST piece.
    let mut inconsistent = Vec::new();
    for id in enumerate(cfg.graph_max)
        .into_iter()
        .filter(|&id| id != FamilyId::U)
    {
        let seed = seed_cylinder(id, &conv)?.measure(cfg.p);
        let v = vertex_count(id).context("vertex count")?;
        let mu = mu_closed_form(id, cfg.p).context("closed form")?;
        if mu != seed * int(v as i64) {
            inconsistent.push(id.to_string());
        }
    }

    let pass = partition.ok() && probability.ok() && inconsistent.is_empty();
    let json = json!({
        "partition_ok": partition.ok(),
        "partition": partition,
        "probability_sum_ok": probability.ok(),
        "probability_sum": probability,
        "measure_inconsistencies": inconsistent,
        "census": rows,
    });
    let csv = to_csv(&rows)?;
    let detail = format!(
        "partition {}, probability defect {}, {} inconsistent measures",
        if partition.ok() { "ok" } else { "broken" },
        probability.defect,
        inconsistent.len()
    );
    Ok(Outcome::new(pass, json, Some(csv), cfg).detail(detail))
}

fn run_monte_carlo(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let cache = cache(cfg);
    let mc = MonteCarloConfig {
        p: cfg.p,
        samples: cfg.samples,
        seed: cfg.seed,
        cap: cfg.cap as usize,
        check_hypotheses: true,
        workers: cfg.workers.map(|w| w as usize),
    };
    let report = monte_carlo(&mc, &cache)?;
    let worst = report.worst_deviation(1e-4);
    let pass = report.passes(1e-4, 5.0) && report.hypothesis_failures == 0;

    // Where the empirical dimension sits relative to both enclosures.
    let check = cross_check(cfg.p, cfg.kmax, cfg.precision as usize)?;
    let z = |d: &DimensionResult| {
        (report.empirical_dimension_decimal - to_f64(d.enclosure.lo())) / report.dimension_std_error
    };
    let json = json!({
        "report": report,
        "worst_deviation": worst.map(|(f, z)| json!({"family": f, "z": z})),
        "dimension_z_graph_sum": z(&check.graph_sum),
        "dimension_z_closed_form": z(&check.closed_form),
    });
    let csv = to_csv(&report.rows)?;
    let detail = format!(
        "worst |z| {:?}, {} cap hits, {} hypothesis failures",
        worst, report.cap_exceeded, report.hypothesis_failures
    );
    Ok(Outcome::new(pass, json, Some(csv), cfg).detail(detail))
}

#[derive(Serialize)]
struct DimensionRow<'a> {
    method: &'a str,
    p: u32,
    kmax: u32,
    head: String,
    lo: String,
    hi: String,
    decimal: String,
    certified_digits: usize,
    tail_exponent: u64,
}

fn dimension_row(d: &DimensionResult) -> DimensionRow<'static> {
    DimensionRow {
        method: match d.method {
            lampdim::dimension::Method::GraphSum => "graph-sum",
            lampdim::dimension::Method::ClosedForm => "closed-form",
        },
        p: d.p,
        kmax: d.kmax,
        head: lampdim::exact::to_fraction_string(&d.head),
        lo: lampdim::exact::to_fraction_string(d.enclosure.lo()),
        hi: lampdim::exact::to_fraction_string(d.enclosure.hi()),
        decimal: d.decimal(),
        certified_digits: d.certified_digits(),
        tail_exponent: d.tail_exponent,
    }
}

fn dimension(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let check = cross_check(cfg.p, cfg.kmax, cfg.precision as usize)?;
    let pass = check.intersect;
    let csv = to_csv([dimension_row(&check.graph_sum), dimension_row(&check.closed_form)])?;
    let detail = format!(
        "enclosures disjoint, closed form minus graph sum = {}",
        check.defect
    );
    Ok(Outcome::new(pass, serde_json::to_value(&check)?, Some(csv), cfg).detail(detail))
}

fn export(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let conv = Conventions::canonical();
    let t = build_t(&operator_s(cfg, &conv));
    let dc = DualityConfig {
        p: cfg.p,
        seed: cfg.seed,
        ..DualityConfig::default()
    };
    let (element, report) = verify_duality(&t, &dc)?;
    let pass = report.ok();
    let json = match &cfg.out {
        Some(path) => {
            let mut s = serde_json::to_string_pretty(&element)?;
            s.push('\n');
            std::fs::write(path, s).with_context(|| format!("writing {}", path.display()))?;
            json!({"report": report, "export_path": path})
        }
        None => json!({"report": report, "export": element}),
    };
    Ok(Outcome {
        pass,
        json,
        csv: None,
        report_path: None,
        detail: None,
    }
    .detail("duality checks failed"))
}

fn all(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let mut results = serde_json::Map::new();
    let mut failed = Vec::new();
    let mut sub_cfg = cfg.clone();
    sub_cfg.out = None;
    for cmd in [
        Command::VerifyGraphs,
        Command::Measures,
        Command::MonteCarlo,
        Command::Dimension,
        Command::Export,
    ] {
        let o = dispatch(&cmd, &sub_cfg)?;
        if !o.pass {
            failed.push(cmd.name());
        }
        results.insert(cmd.name().into(), json!({"pass": o.pass, "result": o.json}));
    }
    let pass = failed.is_empty();
    Ok(Outcome::new(pass, Value::Object(results), None, cfg).detail(format!("failed: {}", failed.join(" "))))
}
