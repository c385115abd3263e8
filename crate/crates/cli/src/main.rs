//! `lampdim`: reproducible reports for the S-graph decomposition of the
//! lamplighter crossed-product operator.
//!
//! Exit status: 0 when every identity checked by the command holds, 1 when
//! one fails, 2 on bad usage, 3 on an internal error.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.is::<config::UsageError>() { 2 } else { 3 })
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let cfg = &cli.config;
    let outcome = commands::dispatch(&cli.command, cfg)?;
    let body = match cfg.format {
        Format::Json => {
            let envelope = commands::envelope(cli.command.name(), cfg, outcome.pass, &outcome.json);
            let mut s = serde_json::to_string_pretty(&envelope)?;
            s.push('\n');
            s
        }
        Format::Csv => outcome
            .csv
            .ok_or_else(|| config::UsageError(format!("{} has no CSV form", cli.command.name())))?,
    };
    match &outcome.report_path {
        Some(path) => std::fs::write(path, body)?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    if !outcome.pass {
        eprintln!(
            "{}: FAIL{}",
            cli.command.name(),
            outcome.detail.map_or(String::new(), |d| format!(" ({d})"))
        );
    }
    Ok(outcome.pass)
}
