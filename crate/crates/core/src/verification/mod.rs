//! Statistical machinery shared by the acceptance checks: empirical pmfs and
//! characteristic functions, distances and z-gates, a reproducible parallel
//! replicate driver, the lattice convergence study and the named suites.

mod mc;
mod stats;
mod suites;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use mc::{convergence_study, run_replicates, stream_id};
pub use stats::{
    covariance_z_check, empirical_cf, empirical_pmf, moment_z_check, sup_cf_distance, tv_distance,
    variance_z_check, Z_GATE,
};
pub use suites::{run_suite, SuiteReport, SUITES};

/// Monte Carlo settings. Results depend on `seed` and `replicates` only; the
/// number of workers changes scheduling, never the numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub replicates: usize,
    pub seed: u64,
    pub workers: usize,
}

impl McConfig {
    pub fn new(replicates: usize, seed: u64, workers: usize) -> Result<Self> {
        let c = Self { replicates, seed, workers };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(invalid("replicates", "must be at least 1"));
        }
        if self.workers == 0 {
            return Err(invalid("workers", "must be at least 1"));
        }
        Ok(())
    }
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            replicates: 100_000,
            seed: 20_240_601,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

/// What a [`ComparisonReport`] measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Metric {
    /// Total-variation distance between two pmf tables.
    Tv,
    /// Largest modulus of a characteristic-function difference over a grid.
    CfSup,
    /// `|estimate - target| / standard error`.
    MomentZ,
    /// Largest absolute difference between two deterministic evaluations.
    AbsError,
    /// Relative change under node doubling.
    RelChange,
    /// `|ratio - 4|` for a second-order Richardson ratio.
    Richardson,
    /// Wall-clock seconds.
    Runtime,
}

/// One gate: `pass` holds exactly when `value <= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub name: String,
    pub metric: Metric,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
    pub metadata: BTreeMap<String, String>,
}

impl ComparisonReport {
    pub fn new(name: impl Into<String>, metric: Metric, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            metric,
            value,
            threshold,
            pass: value <= threshold,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }
}
