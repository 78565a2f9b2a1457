use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use sharpbound_cli::config::ExperimentConfig;
use sharpbound_cli::verify::{self, Fault};
use sharpbound_cli::{run, CliError, Result};

#[derive(Parser)]
#[command(name = "sharpbound", version, about = "Sharp lower bound on Schrödinger ground energies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// JSON experiment config; the built-in reference sweep when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; overrides the path in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the randomized suites; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Solve each row at n and 2n − 1 points and extrapolate.
    #[arg(long)]
    refine: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one potential at one t.
    Eval(Common),
    /// CSV over every (potential, t) cell.
    Sweep(Common),
    /// Runs the verification suites and writes a JSON summary.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// One JSON line of proof-chain quantities per one-dimensional cell.
    Chain(Common),
}

fn load(common: &Common) -> Result<ExperimentConfig> {
    let mut config = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if common.refine {
        config.numerics.refine = true;
    }
    Ok(config)
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut out = sink(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Io(e.into()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Eval(c) => {
            let config = load(&c)?;
            let record = run::run_eval(&config)?;
            let path = c.out.as_deref().or(config.outputs.json_path.as_deref());
            write_json(&record, path)
        }
        Command::Sweep(c) => {
            let config = load(&c)?;
            let rows = run::run_sweep(&config);
            let path = c.out.as_deref().or(config.outputs.csv_path.as_deref());
            run::write_csv(&rows, sink(path)?)?;
            let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
            if failed > 0 {
                return Err(CliError::Numerical(sharpbound::Error::NoConvergence(format!(
                    "{failed} of {} sweep rows failed",
                    rows.len()
                ))));
            }
            Ok(())
        }
        Command::Verify { common, inject_fault } => {
            let config = load(&common)?;
            let fault = match inject_fault.as_deref() {
                None => Fault::None,
                Some("deficit-sign") => Fault::DeficitSign,
                Some(other) => return Err(CliError::Config(format!("unknown fault {other}"))),
            };
            let summary = verify::run_verify(&config, fault)?;
            let path = common.out.as_deref().or(config.outputs.json_path.as_deref());
            write_json(&summary, path)?;
            if summary.passed {
                Ok(())
            } else {
                let names: Vec<&str> = summary
                    .suites
                    .iter()
                    .filter(|s| s.failed > 0)
                    .map(|s| s.name)
                    .collect();
                Err(CliError::Verification(names.join(", ")))
            }
        }
        Command::Chain(c) => {
            let config = load(&c)?;
            let records = run::run_chain(&config);
            let path = c.out.as_deref().or(config.outputs.json_path.as_deref());
            let mut out = sink(path)?;
            for r in &records {
                serde_json::to_writer(&mut out, r).map_err(|e| CliError::Io(e.into()))?;
                writeln!(out)?;
            }
            out.flush()?;
            if records.iter().any(|r| r.error.is_some()) {
                return Err(CliError::Numerical(sharpbound::Error::NoConvergence(
                    "chain report failed".into(),
                )));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let record = serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            eprintln!("{record}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
