//! One function per subcommand. Each writes its result to the configured sink.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::Serialize;
use skellam_fields::field_integrals::{
    compare_cf, gsrf_integral_cf, gsrf_integral_moments, gsrf_integral_of_scatter, prf_integral_cf,
    rl_integral_moments, rl_integral_sample, CfComparisonRow,
};
use skellam_fields::fractional_field::{
    fprf_moments, fprf_pmf_table, fprf_sample, fsrf1_moments, fsrf1_pmf_table, fsrf1_sample, fsrf2_moments,
    fsrf2_pmf_table, fsrf2_sample, fsrf3_moments, fsrf3_pmf_table, fsrf3_sample, FsrfKind, FsrfModel,
};
use skellam_fields::sampling::{sample_poisson, BoxRegion, RngStream};
use skellam_fields::skellam_field::{
    gsrf_count, gsrf_moments, sample_planar_gsrf, srf_pmf_table, GsrfParams, PmfTable,
};
use skellam_fields::specfun::log_gamma;
use skellam_fields::verification::{
    convergence_study, empirical_cf, run_replicates, run_suite, ComparisonReport, SuiteReport, SUITES,
};

use crate::config::{ExperimentConfig, Format, Model, Params, RawConfig};

/// Stream tags keep the draws of different subcommands independent.
const SAMPLE_TAG: u64 = 1;
const CF_TAG: u64 = 2;

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(cfg: &ExperimentConfig, csv: impl FnOnce() -> String, json: impl FnOnce() -> Result<String>) -> Result<()> {
    let text = match cfg.format {
        Format::Csv => csv(),
        Format::Json => json()? + "\n",
    };
    let mut w = sink(cfg.output.as_deref())?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

fn fsrf_model(cfg: &ExperimentConfig) -> Result<FsrfModel> {
    let (Params::Skellam(p), Some(orders)) = (&cfg.params, cfg.orders) else {
        bail!("model {} has no fractional Skellam parameters", cfg.model);
    };
    let kind = match cfg.model {
        Model::Fsrf1 => FsrfKind::I,
        Model::Fsrf2 => FsrfKind::II,
        _ => FsrfKind::III,
    };
    Ok(FsrfModel::new(kind, *p, orders)?)
}

fn poisson_rate(cfg: &ExperimentConfig) -> Result<f64> {
    match cfg.params {
        Params::Poisson(l) => Ok(l),
        _ => bail!("model {} needs lambda", cfg.model),
    }
}

fn general_params(cfg: &ExperimentConfig) -> GsrfParams {
    match &cfg.params {
        Params::Skellam(p) => p.to_gsrf(),
        Params::General(g) => g.clone(),
        Params::Poisson(l) => GsrfParams { jumps: vec![(1.0, *l)] },
    }
}

fn poisson_table(mean: f64, n_max: i64) -> Result<PmfTable> {
    let probs = (0..=n_max)
        .map(|n| {
            if mean == 0.0 {
                return Ok(if n == 0 { 1.0 } else { 0.0 });
            }
            let k = n as f64;
            Ok((k * mean.ln() - mean - log_gamma(k + 1.0)?).exp())
        })
        .collect::<skellam_fields::Result<Vec<_>>>()?;
    Ok(PmfTable::from_probs(0, probs)?)
}

/// pmf over the configured window; a degenerate rectangle gives the single row `n = 0`.
pub fn pmf(cfg: &ExperimentConfig) -> Result<()> {
    let (s, t) = (cfg.point.s, cfg.point.t);
    let (lo, hi) = if s * t == 0.0 { (0, 0) } else { cfg.window };
    let ctrl = &cfg.series;
    let table = match cfg.model {
        Model::Prf => {
            if lo < 0 {
                bail!("invalid n_min: counts are nonnegative for model prf");
            }
            poisson_table(poisson_rate(cfg)? * s * t, hi)?
        }
        Model::Fprf => {
            if lo < 0 {
                bail!("invalid n_min: counts are nonnegative for model fprf");
            }
            let o = cfg.orders.expect("fprf orders are validated");
            fprf_pmf_table(poisson_rate(cfg)?, o.alpha, o.beta, s, t, hi as u64, ctrl)?
        }
        Model::Srf => match cfg.params {
            Params::Skellam(p) => srf_pmf_table(&p, s, t, lo, hi)?,
            _ => unreachable!("srf parameters are validated"),
        },
        Model::Fsrf1 => fsrf1_pmf_table(&fsrf_model(cfg)?, s, t, lo, hi, ctrl)?,
        Model::Fsrf2 => fsrf2_pmf_table(&fsrf_model(cfg)?, s, t, lo, hi, ctrl)?,
        Model::Fsrf3 => fsrf3_pmf_table(&fsrf_model(cfg)?, s, t, lo, hi, ctrl)?,
        Model::Gsrf | Model::Integral => {
            bail!("model {} has no closed-form pmf; use `sample`", cfg.model)
        }
    };
    // Counts below n_min are dropped for nonnegative models; recover the window.
    let table = if cfg.model == Model::Prf || cfg.model == Model::Fprf {
        let skip = lo as usize;
        let probs = table.probs[skip..].to_vec();
        if skip > 0 {
            PmfTable::from_probs(lo, probs)?
        } else {
            table
        }
    } else {
        table
    };
    eprintln!("window [{}, {}], tail mass {:.3e}", table.n_min, table.n_min + table.len() as i64 - 1, table.tail_mass);
    emit(
        cfg,
        || {
            let mut buf = Vec::new();
            table.write_csv(&mut buf).expect("writing to memory");
            String::from_utf8(buf).expect("csv is ascii")
        },
        || Ok(table.to_json()?),
    )
}

fn draw(cfg: &ExperimentConfig, rng: &mut RngStream) -> skellam_fields::Result<f64> {
    let (s, t) = (cfg.point.s, cfg.point.t);
    Ok(match (cfg.model, &cfg.params) {
        (Model::Prf, Params::Poisson(l)) => sample_poisson(l * s * t, rng)? as f64,
        (Model::Fprf, Params::Poisson(l)) => {
            let o = cfg.orders.expect("fprf orders are validated");
            fprf_sample(*l, o.alpha, o.beta, s, t, rng)? as f64
        }
        (Model::Fsrf1 | Model::Fsrf2 | Model::Fsrf3, Params::Skellam(p)) => {
            let o = cfg.orders.expect("fsrf orders are validated");
            match cfg.model {
                Model::Fsrf1 => fsrf1_sample(&FsrfModel::new(FsrfKind::I, *p, o)?, s, t, rng)? as f64,
                Model::Fsrf2 => fsrf2_sample(&FsrfModel::new(FsrfKind::II, *p, o)?, s, t, rng)? as f64,
                _ => fsrf3_sample(&FsrfModel::new(FsrfKind::III, *p, o)?, s, t, rng)? as f64,
            }
        }
        (Model::Integral, Params::Poisson(l)) => rl_integral_sample(*l, &cfg.integral_orders, s, t, rng)?,
        (Model::Integral, Params::General(g)) => {
            let field = sample_planar_gsrf(g, s, t, rng)?;
            gsrf_integral_of_scatter(&field, &cfg.integral_orders, s, t)?
        }
        _ => gsrf_count(&general_params(cfg), &BoxRegion::rectangle(s, t)?, rng)?,
    })
}

fn draws(cfg: &ExperimentConfig, tag: u64) -> Result<Vec<f64>> {
    Ok(run_replicates(&cfg.mc, tag, |rng| draw(cfg, rng))?)
}

#[derive(Serialize)]
struct SampleOutput<'a> {
    model: String,
    s: f64,
    t: f64,
    seed: u64,
    replicates: usize,
    values: &'a [f64],
}

/// `replicates` draws; byte-identical output for a fixed seed and any worker count.
pub fn sample(cfg: &ExperimentConfig) -> Result<()> {
    let values = draws(cfg, SAMPLE_TAG)?;
    let integer = cfg.model != Model::Integral;
    emit(
        cfg,
        || {
            let mut out = String::from("replicate,value\n");
            for (i, v) in values.iter().enumerate() {
                if integer {
                    writeln!(out, "{i},{v}").unwrap();
                } else {
                    writeln!(out, "{i},{v:.16e}").unwrap();
                }
            }
            out
        },
        || {
            Ok(serde_json::to_string_pretty(&SampleOutput {
                model: cfg.model.to_string(),
                s: cfg.point.s,
                t: cfg.point.t,
                seed: cfg.mc.seed,
                replicates: cfg.mc.replicates,
                values: &values,
            })?)
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    /// Covariance with the value at the second point, when available.
    pub covariance: Option<f64>,
}

pub fn analytic_moments(cfg: &ExperimentConfig) -> Result<Moments> {
    let (p1, p2) = (&cfg.point, &cfg.second_point);
    let m = |(mean, variance, cov): (f64, f64, f64)| Moments {
        mean,
        variance,
        covariance: Some(cov),
    };
    Ok(match cfg.model {
        Model::Prf | Model::Srf | Model::Gsrf => m(gsrf_moments(
            &general_params(cfg),
            &BoxRegion::rectangle(p1.s, p1.t)?,
            &BoxRegion::rectangle(p2.s, p2.t)?,
        )?),
        Model::Fprf => {
            let o = cfg.orders.expect("fprf orders are validated");
            m(fprf_moments(poisson_rate(cfg)?, o.alpha, o.beta, p1, p2)?)
        }
        Model::Fsrf1 => m(fsrf1_moments(&fsrf_model(cfg)?, p1, p2)?),
        Model::Fsrf3 => m(fsrf3_moments(&fsrf_model(cfg)?, p1, p2)?),
        Model::Fsrf2 => {
            let (mean, variance) = fsrf2_moments(&fsrf_model(cfg)?, p1.s, p1.t)?;
            Moments {
                mean,
                variance,
                covariance: None,
            }
        }
        Model::Integral => {
            let (mean, variance) = match &cfg.params {
                Params::Poisson(l) => rl_integral_moments(*l, &cfg.integral_orders, p1.s, p1.t)?,
                _ => gsrf_integral_moments(&general_params(cfg), &cfg.integral_orders, p1.s, p1.t)?,
            };
            Moments {
                mean,
                variance,
                covariance: None,
            }
        }
    })
}

pub fn moments(cfg: &ExperimentConfig) -> Result<()> {
    let mo = analytic_moments(cfg)?;
    emit(
        cfg,
        || {
            let mut out = format!("quantity,value\nmean,{:.16e}\nvariance,{:.16e}\n", mo.mean, mo.variance);
            if let Some(c) = mo.covariance {
                writeln!(out, "covariance,{c:.16e}").unwrap();
            }
            out
        },
        || Ok(serde_json::to_string_pretty(&mo)?),
    )
}

/// Analytic characteristic function of the Riemann integral against the
/// empirical one of `replicates` draws.
pub fn cf(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.model != Model::Integral {
        bail!("cf is defined for model integral, not {}", cfg.model);
    }
    if cfg.integral_orders.nu1 != 1.0 || cfg.integral_orders.nu2 != 1.0 {
        bail!("invalid nu1/nu2: the analytic characteristic function covers the Riemann integral (nu1 = nu2 = 1)");
    }
    let (s, t) = (cfg.point.s, cfg.point.t);
    let analytic = cfg
        .grid
        .xi_values
        .iter()
        .map(|&xi| match &cfg.params {
            Params::Poisson(l) => prf_integral_cf(*l, s, t, xi),
            _ => gsrf_integral_cf(&general_params(cfg), s, t, xi),
        })
        .collect::<skellam_fields::Result<Vec<Complex64>>>()?;
    let empirical = empirical_cf(&draws(cfg, CF_TAG)?, &cfg.grid)?;
    let rows = compare_cf(&cfg.grid, &analytic, &empirical)?;
    let sup = rows.iter().fold(0.0_f64, |a, r| a.max(r.abs_error));
    eprintln!("sup |analytic - empirical| = {sup:.3e} over {} points", rows.len());
    emit(
        cfg,
        || {
            let mut out = String::from("xi,analytic_re,analytic_im,empirical_re,empirical_im,abs_error\n");
            for r in &rows {
                writeln!(
                    out,
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                    r.xi, r.analytic_re, r.analytic_im, r.empirical_re, r.empirical_im, r.abs_error
                )
                .unwrap();
            }
            out
        },
        || Ok(serde_json::to_string_pretty::<[CfComparisonRow]>(&rows)?),
    )
}

fn write_reports(cfg_format: Format, output: Option<&Path>, reports: &[ComparisonReport]) -> Result<()> {
    let text = match cfg_format {
        Format::Json => serde_json::to_string_pretty(reports)? + "\n",
        Format::Csv => {
            let mut out = String::from("name,metric,value,threshold,pass\n");
            for r in reports {
                let metric = serde_json::to_value(r.metric)?;
                writeln!(
                    out,
                    "{},{},{:.16e},{:.16e},{}",
                    r.name,
                    metric.as_str().unwrap_or_default(),
                    r.value,
                    r.threshold,
                    r.pass
                )
                .unwrap();
            }
            out
        }
    };
    let mut w = sink(output)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

/// Lattice convergence study; returns whether every distance passed its gate.
pub fn converge(cfg: &ExperimentConfig, tv_threshold: f64) -> Result<bool> {
    if !matches!(cfg.model, Model::Srf | Model::Gsrf | Model::Prf) {
        bail!("converge is defined for models srf, gsrf and prf, not {}", cfg.model);
    }
    let (s, t) = (cfg.point.s, cfg.point.t);
    let reports = convergence_study(&general_params(cfg), s, t, &cfg.k_values, &cfg.mc, cfg.window, tv_threshold)?;
    write_reports(cfg.format, cfg.output.as_deref(), &reports)?;
    Ok(reports.iter().all(|r| r.pass))
}

#[derive(Serialize)]
struct VerifyOutput {
    seed: u64,
    replicates: usize,
    pass: bool,
    suites: Vec<SuiteReport>,
}

/// Runs one suite or all of them and writes a JSON report; returns whether
/// every gate passed.
pub fn verify(raw: &RawConfig, suite: &str) -> Result<bool> {
    let mc = raw.mc()?;
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        bail!("unknown suite {suite:?}; available: all, {}", SUITES.join(", "));
    };
    let mut suites = Vec::with_capacity(names.len());
    for name in names {
        let report = run_suite(name, &mc)?;
        eprintln!("{:<22} {}", name, if report.pass { "PASS" } else { "FAIL" });
        suites.push(report);
    }
    let out = VerifyOutput {
        seed: mc.seed,
        replicates: mc.replicates,
        pass: suites.iter().all(|s| s.pass),
        suites,
    };
    let mut w = sink(raw.output()?.as_deref())?;
    w.write_all((serde_json::to_string_pretty(&out)? + "\n").as_bytes())?;
    w.flush()?;
    Ok(out.pass)
}
