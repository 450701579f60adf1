//! Runs JSON scenarios against the engine and writes deterministic reports.
//!
//! Exit status: 0 when every checked property holds, 1 when one fails (the
//! report carries a witness), 2 on invalid input or an unmet hypothesis.

mod presets;
mod report;
mod resolve;
mod run;
mod scenario;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "heyde", version, about = "Conditional-symmetry scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a scenario file.
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Run a built-in scenario by name.
    Preset {
        name: String,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// List the built-in scenarios.
    ListPresets,
}

#[derive(Args, Debug)]
struct RunOpts {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; the report does not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
    /// Include wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

fn execute(text: &str, opts: &RunOpts) -> Result<u8> {
    let (scenario, raw) = scenario::parse(text)?;
    if let Some(j) = opts.jobs {
        if j == 0 {
            return Err(anyhow!("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().context("thread pool")?;
    }
    let seed = opts.seed.unwrap_or(scenario.header.seed);
    let start = Instant::now();
    let outcome = run::run(&scenario.task, seed)?;
    let (expectations, mut failures) = report::check_expectations(&outcome.verdict, &scenario.header.expect)?;
    failures.splice(0..0, outcome.failures);
    let mut out = json!({
        "engine": { "name": "heyde", "version": env!("CARGO_PKG_VERSION") },
        "scenario": raw,
        "seed": seed,
        "hypotheses": outcome.hypotheses,
        "verdict": outcome.verdict,
        "expectations": expectations,
        "failures": failures,
        "status": if failures.is_empty() { "pass" } else { "fail" },
    });
    if opts.timing {
        out["timing"] = json!({ "elapsed_ms": start.elapsed().as_millis() as u64 });
    }
    let text = serde_json::to_string_pretty(&out)? + "\n";
    match &opts.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    for f in &failures {
        eprintln!("property failed: {f}");
    }
    Ok(if failures.is_empty() { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { scenario, opts } => fs::read_to_string(scenario)
            .with_context(|| format!("reading {}", scenario.display()))
            .and_then(|text| execute(&text, opts)),
        Command::Preset { name, opts } => match presets::get(name) {
            Some(text) => execute(text, opts),
            None => Err(anyhow!("unknown preset {name:?}; try `heyde list-presets`")),
        },
        Command::ListPresets => {
            for (name, text) in presets::PRESETS {
                println!("{name:<22} {}", presets::description(text));
            }
            Ok(0)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }
}
