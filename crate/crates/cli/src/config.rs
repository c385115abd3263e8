use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "lampdim",
    version,
    about = "Kernel dimension of T via S-graph decomposition"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: RunConfig,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check every template against the kernel and flow lemmas and the
    /// S-graph hypotheses.
    VerifyGraphs,
    /// Partition check, probability-sum identity and family census.
    Measures,
    /// Sample points, close and classify their graphs, compare frequencies.
    MonteCarlo,
    /// Graph-sum and closed-form enclosures of the dimension.
    Dimension,
    /// Group-ring export of T and the duality checks.
    Export,
    /// Everything above in one report.
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyGraphs => "verify-graphs",
            Command::Measures => "measures",
            Command::MonteCarlo => "monte-carlo",
            Command::Dimension => "dimension",
            Command::Export => "export",
            Command::All => "all",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct RunConfig {
    /// Lamp alphabet size.
    #[arg(long, global = true, default_value_t = 2, env = "LAMPDIM_P",
          value_parser = clap::value_parser!(u32).range(2..=1000))]
    pub p: u32,

    /// Truncation index of the lacunary series.
    #[arg(long, global = true, default_value_t = 40, env = "LAMPDIM_KMAX",
          value_parser = clap::value_parser!(u32).range(1..=64))]
    pub kmax: u32,

    /// Largest k and l for template checks and the census.
    #[arg(long, global = true, default_value_t = 10, env = "LAMPDIM_GRAPH_MAX",
          value_parser = clap::value_parser!(u32).range(1..=40))]
    pub graph_max: u32,

    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = 1_000_000, env = "LAMPDIM_SAMPLES",
          value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,

    #[arg(long, global = true, default_value_t = 0, env = "LAMPDIM_SEED")]
    pub seed: u64,

    /// Largest graph a closure may build before giving up.
    #[arg(long, global = true, default_value_t = 10_000, env = "LAMPDIM_CAP",
          value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: u64,

    /// Decimal digits in rendered values.
    #[arg(long, global = true, default_value_t = 30, env = "LAMPDIM_PRECISION",
          value_parser = clap::value_parser!(u64).range(1..=2000))]
    pub precision: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json, env = "LAMPDIM_FORMAT")]
    pub format: Format,

    /// Write the report here instead of stdout. For `export` this receives
    /// the group-ring element and the report goes to stdout.
    #[arg(long, global = true, env = "LAMPDIM_OUT")]
    #[serde(skip)]
    pub out: Option<PathBuf>,

    /// Monte Carlo threads; defaults to all cores.
    #[arg(long, global = true, env = "LAMPDIM_WORKERS",
          value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub workers: Option<u64>,

    /// Leave the timestamp out so reruns are byte-identical.
    #[arg(long, global = true, env = "LAMPDIM_NO_TIMESTAMP")]
    #[serde(skip)]
    pub no_timestamp: bool,

    /// Perturb one coefficient of S (negative control).
    #[arg(long, global = true, hide = true, env = "LAMPDIM_TAMPER")]
    pub tamper: bool,
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_after_subcommand() {
        let cli = Cli::try_parse_from(["lampdim", "dimension", "--p", "3", "--kmax", "12"]).unwrap();
        assert_eq!(cli.command, Command::Dimension);
        assert_eq!((cli.config.p, cli.config.kmax), (3, 12));
        assert_eq!(cli.config.samples, 1_000_000);
    }
}
