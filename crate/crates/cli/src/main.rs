use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use gauge_ca_cli::{parse_scenario, render_trace, report, run_checks, simulate, Format, Scenario};

#[derive(Parser)]
#[command(
    name = "gauge-ca",
    version,
    about = "Gauge-invariant cellular automata: simulate scenarios and check invariance"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a scenario and print its space-time diagram.
    Simulate {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Run the checks listed in a scenario's [run] section.
    Check {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(clap::Args)]
struct Common {
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the number of steps.
    #[arg(long)]
    steps: Option<usize>,
    /// Write output to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Svg,
}

fn load(path: &Path, common: &Common) -> anyhow::Result<Scenario> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut scenario = parse_scenario(&text).with_context(|| format!("{}", path.display()))?;
    if let Some(seed) = common.seed {
        scenario.run.seed = seed;
    }
    if let Some(steps) = common.steps {
        scenario.run.steps = steps;
    }
    Ok(scenario)
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `Ok(true)` when every check passed.
fn execute(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Simulate { file, common, format } => {
            let scenario = load(&file, &common)?;
            let trace = simulate(&scenario, scenario.run.steps)?;
            let format = match format {
                OutputFormat::Text => Format::Text,
                OutputFormat::Svg => Format::Svg,
            };
            emit(&render_trace(&trace, format)?, common.out.as_deref())?;
            Ok(true)
        }
        Command::Check { file, common } => {
            let scenario = load(&file, &common)?;
            let outcomes = run_checks(&scenario, scenario.run.steps)?;
            emit(&report(&outcomes), common.out.as_deref())?;
            Ok(outcomes.iter().all(|o| o.passed))
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
