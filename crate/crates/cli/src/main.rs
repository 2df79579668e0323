//! `skellam`: pmfs, samples, moments, characteristic functions, lattice
//! convergence studies and verification suites from a flat config file.

// `!(x > 0.0)` deliberately rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use config::{ExperimentConfig, Format, RawConfig};

#[derive(Parser)]
#[command(name = "skellam", version, about = "Skellam and fractional Skellam random fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the pmf of the configured model over `n_min..=n_max`.
    Pmf(Common),
    /// Draw `replicates` independent values at `(s, t)`.
    Sample(Common),
    /// Analytic mean, variance and covariance between `(s, t)` and `(s2, t2)`.
    Moments(Common),
    /// Analytic versus empirical characteristic function of the field integral.
    Cf(Common),
    /// Total-variation distance of the lattice approximation for each `k`.
    Converge {
        #[command(flatten)]
        common: Common,
        /// Gate applied to every distance.
        #[arg(long, default_value_t = 0.02)]
        tv_threshold: f64,
    },
    /// Run verification suites and write a JSON report.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` experiment file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one config key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl Common {
    fn raw(&self) -> Result<RawConfig> {
        let mut raw = match &self.config {
            Some(p) => RawConfig::load(p)?,
            None => RawConfig::default(),
        };
        for pair in &self.set {
            raw.set_pair(pair)?;
        }
        if let Some(s) = self.seed {
            raw.set("seed", s);
        }
        if let Some(w) = self.workers {
            raw.set("workers", w);
        }
        if let Some(o) = &self.output {
            raw.set("output", o.display());
        }
        if let Some(f) = self.format {
            raw.set("format", if f == Format::Csv { "csv" } else { "json" });
        }
        Ok(raw)
    }

    fn config(&self) -> Result<ExperimentConfig> {
        ExperimentConfig::from_raw(&self.raw()?)
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Pmf(c) => commands::pmf(&c.config()?).map(|_| true),
        Command::Sample(c) => commands::sample(&c.config()?).map(|_| true),
        Command::Moments(c) => commands::moments(&c.config()?).map(|_| true),
        Command::Cf(c) => commands::cf(&c.config()?).map(|_| true),
        Command::Converge { common, tv_threshold } => commands::converge(&common.config()?, tv_threshold),
        Command::Verify { common, suite } => commands::verify(&common.raw()?, &suite),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
