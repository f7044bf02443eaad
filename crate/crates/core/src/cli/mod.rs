// SPDX-License-Identifier: MIT OR Apache-2.0

//! Command-line front end.
//!
//! Exit codes: 0 success, 2 configuration error, 3 runtime error.

mod commands;
mod config;
mod format;
mod output;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

pub use commands::{read_sample, AffinityConfig, DetectConfig, EstimateConfig, SampleSource, SimulateConfig};
pub use config::{load_config, parse_config};
pub use format::format_sig;
pub use output::{Cell, Format, Metadata, Table};

use commands::{Outcome, Seeded};
use crate::error::Result;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "segdetect", version, about = "Segment detection and estimation toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Overrides the config's master seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,

    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw one sample.
    Simulate(ConfigArg),
    /// Run the anchored or scan test on one sample.
    Detect(ConfigArg),
    /// Fit an estimator to one sample.
    Estimate(ConfigArg),
    /// Monte Carlo risk curve and rate fit.
    Risk(ConfigArg),
    /// Type-I, worst type-II and total test error per sample size.
    Separation(ConfigArg),
    /// Exceedance curve of the scaled sym-diff error.
    Tail(ConfigArg),
    /// Hellinger affinity between the laws of two segments.
    Affinity(ConfigArg),
    /// Compare the linear-time routines with exhaustive search.
    OracleCheck(ConfigArg),
}

#[derive(Debug, clap::Args)]
pub struct ConfigArg {
    /// JSON config, or TOML when the name ends in `.toml`.
    #[arg(long)]
    pub config: PathBuf,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Detect(_) => "detect",
            Command::Estimate(_) => "estimate",
            Command::Risk(_) => "risk",
            Command::Separation(_) => "separation",
            Command::Tail(_) => "tail",
            Command::Affinity(_) => "affinity",
            Command::OracleCheck(_) => "oracle-check",
        }
    }

    fn config_path(&self) -> &Path {
        match self {
            Command::Simulate(c)
            | Command::Detect(c)
            | Command::Estimate(c)
            | Command::Risk(c)
            | Command::Separation(c)
            | Command::Tail(c)
            | Command::Affinity(c)
            | Command::OracleCheck(c) => &c.config,
        }
    }
}

/// Loads a seeded config and applies the `--seed` override.
fn seeded_config<T: DeserializeOwned + Seeded>(path: &Path, seed: Option<u64>) -> Result<T> {
    let mut cfg: T = load_config(path)?;
    if let Some(s) = seed {
        cfg.set_seed(s);
    }
    Ok(cfg)
}

struct Run {
    outcome: Outcome,
    seed: u64,
    config: serde_json::Value,
    runtime: Option<f64>,
}

fn finish<T: Serialize + Seeded>(cfg: &T, outcome: Outcome, runtime: Option<f64>) -> Result<Run> {
    Ok(Run { outcome, seed: cfg.seed(), config: serde_json::to_value(cfg)?, runtime })
}

fn dispatch(cli: &Cli) -> Result<Run> {
    let path = cli.command.config_path();
    let base = path.parent().unwrap_or(Path::new("."));
    match cli.command {
        Command::Simulate(_) => {
            let cfg: SimulateConfig = seeded_config(path, cli.seed)?;
            finish(&cfg, commands::run_simulate(&cfg)?, None)
        }
        Command::Detect(_) => {
            let cfg: DetectConfig = seeded_config(path, cli.seed)?;
            finish(&cfg, commands::run_detect(&cfg, base)?, None)
        }
        Command::Estimate(_) => {
            let cfg: EstimateConfig = seeded_config(path, cli.seed)?;
            finish(&cfg, commands::run_estimate(&cfg, base)?, None)
        }
        Command::Risk(_) => {
            let cfg = seeded_config(path, cli.seed)?;
            let (o, t) = commands::run_risk(&cfg)?;
            finish(&cfg, o, Some(t))
        }
        Command::Separation(_) => {
            let cfg = seeded_config(path, cli.seed)?;
            let (o, t) = commands::run_separation(&cfg)?;
            finish(&cfg, o, Some(t))
        }
        Command::Tail(_) => {
            let cfg = seeded_config(path, cli.seed)?;
            let (o, t) = commands::run_tail(&cfg)?;
            finish(&cfg, o, Some(t))
        }
        Command::Affinity(_) => {
            let cfg: AffinityConfig = load_config(path)?;
            let outcome = commands::run_affinity(&cfg)?;
            Ok(Run { outcome, seed: cli.seed.unwrap_or(0), config: serde_json::to_value(&cfg)?, runtime: None })
        }
        Command::OracleCheck(_) => {
            let cfg = seeded_config(path, cli.seed)?;
            finish(&cfg, commands::run_oracle(&cfg)?, None)
        }
    }
}

fn execute(cli: &Cli) -> Result<(String, Option<String>)> {
    let started = Instant::now();
    let run = dispatch(cli)?;
    let name = cli.command.name();
    let meta = Metadata::new(name, run.seed, run.config);
    let written = output::write_tables(&cli.out, cli.format, &meta, &run.outcome.tables)?;
    // wall time lives beside the data so reruns stay byte-identical
    let runtime = run.runtime.unwrap_or_else(|| started.elapsed().as_secs_f64());
    fs::write(cli.out.join(format!("{name}.runtime")), format!("{runtime:.3}\n"))?;
    let files: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
    let line = format!("{} [seed {}, {:.2} s, wrote {}]", run.outcome.summary, run.seed, runtime, files.join(", "));
    Ok((line, run.outcome.failure))
}

/// Parses `args`, runs the subcommand and returns the exit code.
pub fn run_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return EXIT_RUNTIME;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok((line, None)) => {
            println!("{line}");
            EXIT_OK
        }
        Ok((line, Some(failure))) => {
            println!("{line}");
            eprintln!("error: {failure}");
            EXIT_RUNTIME
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config_error() { EXIT_CONFIG } else { EXIT_RUNTIME }
        }
    }
}

pub fn main() -> i32 {
    run_with(std::env::args_os())
}
