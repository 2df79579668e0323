//! Flat `key = value` experiment documents and their validation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use skellam_fields::field_integrals::{CfGrid, IntegralOrders};
use skellam_fields::fractional_field::FracOrders;
use skellam_fields::skellam_field::{GridPoint, GsrfParams, SkellamParams};
use skellam_fields::specfun::SeriesControl;
use skellam_fields::verification::McConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Prf,
    Fprf,
    Gsrf,
    Srf,
    Fsrf1,
    Fsrf2,
    Fsrf3,
    Integral,
}

impl FromStr for Model {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "prf" => Model::Prf,
            "fprf" => Model::Fprf,
            "gsrf" => Model::Gsrf,
            "srf" => Model::Srf,
            "fsrf1" => Model::Fsrf1,
            "fsrf2" => Model::Fsrf2,
            "fsrf3" => Model::Fsrf3,
            "integral" => Model::Integral,
            _ => bail!("unknown model {s:?}; expected prf, fprf, gsrf, srf, fsrf1, fsrf2, fsrf3 or integral"),
        })
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Model::Prf => "prf",
            Model::Fprf => "fprf",
            Model::Gsrf => "gsrf",
            Model::Srf => "srf",
            Model::Fsrf1 => "fsrf1",
            Model::Fsrf2 => "fsrf2",
            Model::Fsrf3 => "fsrf3",
            Model::Integral => "integral",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => bail!("unknown format {s:?}; expected csv or json"),
        }
    }
}

/// Raw `key -> value` pairs, later entries overriding earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            raw.set_pair(line).with_context(|| format!("config line {}", i + 1))?;
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text)
    }

    /// Applies one `key=value` override.
    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| anyhow!("expected key=value, got {pair:?}"))?;
        let key = k.trim();
        if key.is_empty() {
            bail!("empty key in {pair:?}");
        }
        self.entries.insert(key.to_string(), v.trim().to_string());
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    /// Monte Carlo settings; every other key is ignored.
    pub fn mc(&self) -> Result<McConfig> {
        let defaults = McConfig::default();
        let mc = McConfig {
            replicates: self.get("replicates")?.unwrap_or(defaults.replicates),
            seed: self.get("seed")?.unwrap_or(defaults.seed),
            workers: self.get("workers")?.unwrap_or(defaults.workers),
        };
        field("replicates/workers", mc.validate())?;
        Ok(mc)
    }

    pub fn output(&self) -> Result<Option<PathBuf>> {
        self.get("output")
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.entries
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| anyhow!("invalid value for {key}: {v:?} ({e})")))
            .transpose()
    }

    fn require<T: FromStr>(&self, key: &str, model: Model) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        self.get(key)?
            .ok_or_else(|| anyhow!("missing required key {key} for model {model}"))
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: fmt::Display,
    {
        let Some(v) = self.entries.get(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(|x| {
                x.trim()
                    .parse::<T>()
                    .map_err(|e| anyhow!("invalid value for {key}: {x:?} ({e})"))
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }
}

/// Model parameters in the form the model needs.
#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Poisson(f64),
    Skellam(SkellamParams),
    General(GsrfParams),
}

/// A validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: Model,
    pub params: Params,
    pub orders: Option<FracOrders>,
    pub integral_orders: IntegralOrders,
    pub point: GridPoint,
    pub second_point: GridPoint,
    pub window: (i64, i64),
    pub mc: McConfig,
    pub series: SeriesControl,
    pub grid: CfGrid,
    pub k_values: Vec<u64>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

fn field<T>(name: &str, r: skellam_fields::Result<T>) -> Result<T> {
    r.map_err(|e| anyhow!("invalid {name}: {e}"))
}

fn parse_jumps(text: &str) -> Result<GsrfParams> {
    let jumps = text
        .split(',')
        .map(|pair| {
            let (j, l) = pair
                .split_once(':')
                .ok_or_else(|| anyhow!("invalid value for jumps: {pair:?} is not size:rate"))?;
            let j: f64 = j.trim().parse().map_err(|_| anyhow!("invalid value for jumps: size {j:?}"))?;
            let l: f64 = l.trim().parse().map_err(|_| anyhow!("invalid value for jumps: rate {l:?}"))?;
            Ok((j, l))
        })
        .collect::<Result<Vec<_>>>()?;
    field("jumps", GsrfParams::new(jumps))
}

impl ExperimentConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let model: Model = raw
            .get("model")?
            .ok_or_else(|| anyhow!("missing required key model"))?;
        let params = match model {
            Model::Prf | Model::Fprf => {
                let l: f64 = raw.require("lambda", model)?;
                if !(l > 0.0) || !l.is_finite() {
                    bail!("invalid lambda: {l} must be positive and finite");
                }
                Params::Poisson(l)
            }
            Model::Srf | Model::Fsrf1 | Model::Fsrf2 | Model::Fsrf3 => {
                let l1 = raw.require("lambda1", model)?;
                let l2 = raw.require("lambda2", model)?;
                Params::Skellam(field("lambda1/lambda2", SkellamParams::new(l1, l2))?)
            }
            Model::Gsrf => Params::General(parse_jumps(&raw.require::<String>("jumps", model)?)?),
            Model::Integral => match raw.get::<String>("jumps")? {
                Some(j) => Params::General(parse_jumps(&j)?),
                None => {
                    let l: f64 = raw.require("lambda", model)?;
                    if !(l > 0.0) || !l.is_finite() {
                        bail!("invalid lambda: {l} must be positive and finite");
                    }
                    Params::Poisson(l)
                }
            },
        };
        let orders = match model {
            Model::Fprf | Model::Fsrf1 => Some(field(
                "alpha/beta",
                FracOrders::new(raw.require("alpha", model)?, raw.require("beta", model)?),
            )?),
            Model::Fsrf2 => Some(field("alpha", FracOrders::new(raw.require("alpha", model)?, 1.0))?),
            Model::Fsrf3 => Some(field(
                "alpha/beta/alpha2/beta2",
                FracOrders::with_second(
                    raw.require("alpha", model)?,
                    raw.require("beta", model)?,
                    raw.require("alpha2", model)?,
                    raw.require("beta2", model)?,
                ),
            )?),
            _ => None,
        };
        let integral_orders = field(
            "nu1/nu2",
            IntegralOrders::new(raw.get("nu1")?.unwrap_or(1.0), raw.get("nu2")?.unwrap_or(1.0)),
        )?;
        let s = raw.get("s")?.unwrap_or(1.0);
        let t = raw.get("t")?.unwrap_or(1.0);
        let point = field("s/t", GridPoint::new(s, t))?;
        let second_point = field(
            "s2/t2",
            GridPoint::new(raw.get("s2")?.unwrap_or(s), raw.get("t2")?.unwrap_or(t)),
        )?;
        let default_min = if matches!(model, Model::Prf | Model::Fprf) { 0 } else { -30 };
        let window = (
            raw.get("n_min")?.unwrap_or(default_min),
            raw.get("n_max")?.unwrap_or(30),
        );
        if window.0 > window.1 {
            bail!("invalid n_min: {} exceeds n_max {}", window.0, window.1);
        }
        let mc = raw.mc()?;
        let sd = SeriesControl::default();
        let series = field(
            "rel_tol/max_terms/consecutive_small",
            SeriesControl::new(
                raw.get("rel_tol")?.unwrap_or(sd.rel_tol),
                raw.get("max_terms")?.unwrap_or(sd.max_terms),
                raw.get("consecutive_small")?.unwrap_or(sd.consecutive_small),
            ),
        )?;
        let grid = match raw.list::<f64>("xi")? {
            Some(xs) => field("xi", CfGrid::new(xs))?,
            None => CfGrid::standard(),
        };
        let k_values = raw.list::<u64>("k")?.unwrap_or_else(|| vec![16, 32, 64]);
        Ok(Self {
            model,
            params,
            orders,
            integral_orders,
            point,
            second_point,
            window,
            mc,
            series,
            grid,
            k_values,
            output: raw.output()?,
            format: raw.get("format")?.unwrap_or(Format::Csv),
        })
    }
}
