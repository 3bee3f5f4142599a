use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use qldrift_cli::acceptance::{run_criterion, write_report, AcceptanceOptions, Level};
use qldrift_cli::{cmd_field, cmd_pair, cmd_particles, cmd_sweep, default_workers, ExperimentConfig, Preset, RunOutcome, SweepAxis, SweepTarget};

#[derive(Parser)]
#[command(name = "qldrift", version, about = "Monte Carlo experiments on particle drift in dense random wave spectra")]
struct Cli {
    /// TOML config with dotted keys, e.g. `spectrum.M = 128`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Start from a shipped preset (applied before --config).
    #[arg(long, global = true, value_enum)]
    preset: Option<Preset>,
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Number of repetitions (pair: number of paths).
    #[arg(long, global = true)]
    reps: Option<usize>,
    /// Reduced-scale run.
    #[arg(long, global = true)]
    quick: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample paths of the controlling process U.
    Field,
    /// Integrate particles in random fields.
    Particles,
    /// Simulate the relative-coordinate pair process.
    Pair,
    /// Run the acceptance suite; exit 0 iff every criterion passes.
    Verify {
        /// Run only these criteria (1-8).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
    /// One sub-run per value of a parameter.
    Sweep {
        #[arg(long, value_enum)]
        axis: SweepAxis,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long, value_enum, default_value = "field")]
        target: SweepTarget,
    },
}

enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, Failure> {
    let base = cli.preset.map(Preset::config).unwrap_or_default();
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(anyhow::anyhow!("reading {}: {e}", path.display())))?;
            ExperimentConfig::from_toml_str_over(&text, &base).map_err(Failure::Usage)?
        }
        None => base,
    };
    if let Some(seed) = cli.seed {
        cfg.run.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.run.output_dir = out.clone();
    }
    if let Some(reps) = cli.reps {
        cfg.run.repetitions = reps;
        cfg.pair.paths = reps;
    }
    if cli.quick {
        cfg.run.repetitions = cfg.run.repetitions.min(50);
        cfg.pair.paths = cfg.pair.paths.min(100);
    }
    cfg.validate().map_err(Failure::Usage)?;
    Ok(cfg)
}

fn report(outcome: &RunOutcome) -> ExitCode {
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    for v in &outcome.verdicts {
        println!("{v}");
    }
    println!("wrote {} data files to {}", outcome.files.len(), outcome.dir.display());
    if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    let workers = default_workers();
    let rt = Failure::Runtime;
    match &cli.command {
        Command::Verify { only } => {
            let level = if cli.quick { Level::Quick } else { Level::Full };
            let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("qldrift-verify"));
            std::fs::create_dir_all(&out).map_err(|e| rt(e.into()))?;
            let mut opts = AcceptanceOptions::new(level, &out);
            opts.workers = workers;
            if let Some(seed) = cli.seed {
                opts.seed = seed;
            }
            let ids: Vec<u8> = if only.is_empty() { (1..=8).collect() } else { only.clone() };
            if let Some(bad) = ids.iter().find(|&&i| !(1..=8).contains(&i)) {
                return Err(Failure::Usage(anyhow::anyhow!("no criterion {bad}; choose from 1-8")));
            }
            let mut outcomes = Vec::new();
            for id in ids {
                let o = run_criterion(id, &opts);
                println!("{}", o.line());
                for r in o.failures() {
                    println!("    {r}");
                }
                outcomes.push(o);
            }
            let path = out.join("verdicts.json");
            write_report(&path, &opts, &outcomes).map_err(rt)?;
            println!("report: {}", path.display());
            Ok(if outcomes.iter().all(|o| o.passed) { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Field => Ok(report(&cmd_field(&load_config(cli)?, workers).map_err(rt)?)),
        Command::Particles => Ok(report(&cmd_particles(&load_config(cli)?, workers).map_err(rt)?)),
        Command::Pair => Ok(report(&cmd_pair(&load_config(cli)?, workers).map_err(rt)?)),
        Command::Sweep { axis, values, target } => {
            let (outcome, rows) = cmd_sweep(&load_config(cli)?, *target, *axis, values, workers).map_err(rt)?;
            for r in &rows {
                println!("{axis:?} = {}: {} = {:.6} [{}]", r.value, r.statistic, r.statistic_value, if r.passed { "pass" } else { "fail" });
            }
            Ok(report(&outcome))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            eprintln!("usage error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
