use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::mc::{convergence_study, run_replicates};
use super::stats::{
    covariance_z_check, empirical_cf, empirical_pmf, moment_z_check, sup_cf_distance, tv_distance, variance_z_check,
};
use super::{ComparisonReport, McConfig, Metric};
use crate::error::{invalid, Result};
use crate::field_integrals::{
    gsrf_integral_cf, gsrf_integral_sample, prf_integral_cf, rl_integral_moments, rl_integral_sample,
    scaled_compound_sample, CfGrid, IntegralOrders,
};
use crate::fractional_field::{
    fprf_joint_sample, fprf_moments, fprf_pmf_table, fprf_sample, fsrf1_moments, fsrf1_pmf, fsrf1_pmf_table,
    fsrf1_sample, fsrf2_moments, fsrf2_pgf, fsrf2_pmf, fsrf2_pmf_table, fsrf2_sample, fsrf3_moments, fsrf3_pmf,
    fsrf3_pmf_table, fsrf3_sample, inverse_subordinator_cross_moment_checked, inverse_subordinator_mean,
    inverse_subordinator_second_moment, FsrfModel,
};
use crate::sampling::{sample_inverse_subordinator, BoxRegion, RngStream, DEFAULT_PATH_STEP};
use crate::skellam_field::{
    gsrf_compound_sample, gsrf_count, srf_moments, srf_pde_residual, srf_pmf, srf_pmf_table, GridPoint,
    GsrfParams, PmfTable, SkellamParams,
};
use crate::specfun::{bessel_i, ln_gamma, mittag_leffler2, mittag_leffler3, wright, SeriesControl, WrightSpec};

/// Names accepted by [`run_suite`], in acceptance order.
pub const SUITES: [&str; 12] = [
    "srf-oracle",
    "srf-mc",
    "compound",
    "inverse-subordinator",
    "fsrf1",
    "fsrf2",
    "fsrf3",
    "theorem31",
    "governing-equations",
    "integrals",
    "fprf",
    "specfun",
];

/// All gates of one suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub reports: Vec<ComparisonReport>,
    pub pass: bool,
}

/// Runs the named suite; `"all"` is not a suite, iterate [`SUITES`] instead.
pub fn run_suite(name: &str, cfg: &McConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let start = Instant::now();
    let (mut reports, budget) = match name {
        "srf-oracle" => (srf_oracle()?, 1.0),
        "srf-mc" => (srf_mc(cfg)?, 30.0),
        "compound" => (compound(cfg)?, 60.0),
        "inverse-subordinator" => (inverse_subordinator(cfg)?, 20.0),
        "fsrf1" => (fsrf1(cfg)?, 120.0),
        "fsrf2" => (fsrf2(cfg)?, 90.0),
        "fsrf3" => (fsrf3(cfg)?, 180.0),
        "theorem31" => (theorem31(cfg)?, 120.0),
        "governing-equations" => (governing_equations()?, 1.0),
        "integrals" => (integrals(cfg)?, 120.0),
        "fprf" => (fprf(cfg)?, 120.0),
        "specfun" => (specfun()?, 1.0),
        _ => {
            return Err(invalid("suite", format!("unknown suite {name:?}; available: {}", SUITES.join(", "))));
        }
    };
    reports.push(ComparisonReport::new("runtime", Metric::Runtime, start.elapsed().as_secs_f64(), budget));
    let pass = reports.iter().all(|r| r.pass);
    Ok(SuiteReport {
        suite: name.to_string(),
        reports,
        pass,
    })
}

fn ctrl() -> SeriesControl {
    SeriesControl::default()
}

fn unit() -> Result<BoxRegion> {
    BoxRegion::rectangle(1.0, 1.0)
}

fn as_f64(xs: &[i64]) -> Vec<f64> {
    xs.iter().map(|&x| x as f64).collect()
}

fn tv_report(name: &str, draws: &[i64], reference: &PmfTable, threshold: f64) -> Result<ComparisonReport> {
    let emp = empirical_pmf(draws, reference.n_min, reference.n_max)?;
    Ok(ComparisonReport::new(name, Metric::Tv, tv_distance(&emp, reference)?, threshold).with("replicates", draws.len()))
}

fn max_abs<I: IntoIterator<Item = Result<f64>>>(diffs: I) -> Result<f64> {
    diffs.into_iter().try_fold(0.0_f64, |m, d| Ok(m.max(d?.abs())))
}

/// Poisson pmf from its log form, independent of the Bessel route.
fn poisson_pmf(lambda: f64, k: u64) -> f64 {
    (k as f64 * lambda.ln() - lambda - ln_gamma(k as f64 + 1.0)).exp()
}

fn srf_oracle() -> Result<Vec<ComparisonReport>> {
    let p = SkellamParams::new(2.0, 1.0)?;
    let err = max_abs((-20..=20).map(|n: i64| {
        let lo = (-n).max(0) as u64;
        let oracle: f64 = (lo..lo + 200).map(|k| poisson_pmf(2.0, (n + k as i64) as u64) * poisson_pmf(1.0, k)).sum();
        Ok(srf_pmf(&p, 1.0, 1.0, n)? - oracle)
    }))?;
    Ok(vec![ComparisonReport::new("srf pmf vs Poisson convolution", Metric::AbsError, err, 1e-12)])
}

fn srf_mc(cfg: &McConfig) -> Result<Vec<ComparisonReport>> {
    let p = SkellamParams::new(2.0, 1.0)?;
    let g = p.to_gsrf();
    let region = unit()?;
    let draws = run_replicates(cfg, 1, |rng| Ok(gsrf_count(&g, &region, rng)? as i64))?;
    let table = srf_pmf_table(&p, 1.0, 1.0, -30, 30)?;
    let (mean, var) = srf_moments(&p, 1.0, 1.0);
    let xs = as_f64(&draws);
    Ok(vec![
        tv_report("gsrf_count vs srf pmf", &draws, &table, 0.01)?,
        moment_z_check("mean", &xs, mean, var)?,
        variance_z_check("variance", &xs, var)?,
    ])
}

fn compound(cfg: &McConfig) -> Result<Vec<ComparisonReport>> {
    let g = GsrfParams::new(vec![(1.0, 2.0), (-1.0, 1.0), (2.0, 0.5)])?;
    let region = unit()?;
    let direct = run_replicates(cfg, 1, |rng| Ok(gsrf_count(&g, &region, rng)? as i64))?;
    let comp = run_replicates(cfg, 2, |rng| Ok(gsrf_compound_sample(&g, &region, rng)? as i64))?;
    let a = empirical_pmf(&direct, -15, 15)?;
    let b = empirical_pmf(&comp, -15, 15)?;
    Ok(vec![ComparisonReport::new("compound vs direct", Metric::Tv, tv_distance(&a, &b)?, 0.015)])
}

fn inverse_subordinator(cfg: &McConfig) -> Result<Vec<ComparisonReport>> {
    let mut out = Vec::new();
    for (tag, alpha) in [(1u64, 0.5), (2, 0.8)] {
        let draws = run_replicates(cfg, tag, |rng| sample_inverse_subordinator(alpha, 1.0, rng))?;
        for u in [0.5, 1.0, 2.0] {
            let laplace: Vec<f64> = draws.iter().map(|e| (-u * e).exp()).collect();
            let target = mittag_leffler2(alpha, -u)?;
            let var = mittag_leffler2(alpha, -2.0 * u)? - target * target;
            out.push(moment_z_check(&format!("alpha={alpha} Laplace u={u}"), &laplace, target, var)?);
        }
        let mean = inverse_subordinator_mean(alpha, 1.0)?;
        let var = inverse_subordinator_second_moment(alpha, 1.0)? - mean * mean;
        out.push(moment_z_check(&format!("alpha={alpha} mean"), &draws, mean, var)?);
    }
    Ok(out)
}

/// Largest `|fractional pmf - srf_pmf|` over a window at the integer orders.
fn reduction_error<F>(p: &SkellamParams, s: f64, t: f64, span: i64, f: F) -> Result<f64>
where
    F: Fn(i64) -> Result<f64>,
{
    max_abs((-span..=span).map(|n| Ok(f(n)? - srf_pmf(p, s, t, n)?)))
}

fn fsrf1(cfg: &McConfig) -> Result<Vec<ComparisonReport>> {
    let mut out = Vec::new();
    let mut err: f64 = 0.0;
    for (l1, l2, s, t) in [(1.0, 0.5, 1.0, 1.0), (2.0, 1.0, 1.2, 0.9)] {
        let p = SkellamParams::new(l1, l2)?;
        let m = FsrfModel::type_one(p, 1.0, 1.0)?;
        err = err.max(reduction_error(&p, s, t, 15, |n| fsrf1_pmf(&m, s, t, n, &ctrl()))?);
    }
    out.push(ComparisonReport::new("orders 1 reduce to srf pmf", Metric::AbsError, err, 1e-10));

    let m = FsrfModel::type_one(SkellamParams::new(1.0, 0.5)?, 0.7, 0.7)?;
    let table = fsrf1_pmf_table(&m, 1.0, 1.0, -8, 8, &ctrl())?;
    let draws = run_replicates(cfg, 1, |rng| fsrf1_sample(&m, 1.0, 1.0, rng))?;
    out.push(tv_report("series vs time-change samples", &draws, &table, 0.02)?);
    let pt = GridPoint::new(1.0, 1.0)?;
    let (mean, var, _) = fsrf1_moments(&m, &pt, &pt)?;
    let xs = as_f64(&draws);
    out.push(moment_z_check("mean", &xs, mean, var)?);
    out.push(variance_z_check("variance", &xs, var)?);

    let half = FsrfModel::type_one(SkellamParams::new(2.0, 1.0)?, 0.5, 0.5)?;
    let (mean, _, _) = fsrf1_moments(&half, &pt, &pt)?;
    let target = 4.0 / std::f64::consts::PI;
    out.push(ComparisonReport::new("mean at orders 1/2 is 4/pi", Metric::AbsError, (mean - target).abs(), 1e-12));
    Ok(out)
}

fn fsrf2(cfg: &McConfig) -> Result<Vec<ComparisonReport>> {
    let mut out = Vec::new();
    let mut err: f64 = 0.0;
    for (l1, l2, s, t) in [(1.0, 0.5, 1.0, 1.0), (2.0, 1.0, 1.2, 0.9)] {
        let p = SkellamParams::new(l1, l2)?;
        let m = FsrfModel::type_two(p, 1.0)?;
        err = err.max(reduction_error(&p, s, t, 15, |n| fsrf2_pmf(&m, s, t, n, &ctrl()))?);
    }
    out.push(ComparisonReport::new("order 1 reduces to srf pmf", Metric::AbsError, err, 1e-10));

    let m = FsrfModel::type_two(SkellamParams::new(1.0, 0.5)?, 0.7)?;
    let table = fsrf2_pmf_table(&m, 1.0, 1.0, -10, 10, &ctrl())?;
    let draws = run_replicates(cfg, 1, |rng| fsrf2_sample(&m, 1.0, 1.0, rng))?;
    out.push(tv_report("series vs time-change samples", &draws, &table, 0.02)?);

    let u: f64 = 0.8;
    let from_pmf = (-40..=40).try_fold(0.0, |acc, n| Ok::<_, crate::Error>(acc + fsrf2_pmf(&m, 1.0, 1.0, n, &ctrl())? * u.powi(n as i32)))?;
    let pgf = fsrf2_pgf(&m, u, 1.0, 1.0, &ctrl())?;
    out.push(ComparisonReport::new("pgf vs pmf at u=0.8", Metric::AbsError, (from_pmf - pgf).abs(), 1e-6));

    let (mean, var) = fsrf2_moments(&m, 1.0, 1.0)?;
    let xs = as_f64(&draws);
    out.push(moment_z_check("mean", &xs, mean, var)?);
    out.push(variance_z_check("variance", &xs, var)?);
    Ok(out)
}

fn fsrf3(cfg: &McConfig) -> Result<Vec<ComparisonReport>> {
    let mut out = Vec::new();
    let p = SkellamParams::new(1.0, 0.5)?;
    let ones = FsrfModel::type_three(p, 1.0, 1.0, 1.0, 1.0)?;
    let err = reduction_error(&p, 1.0, 1.0, 5, |n| fsrf3_pmf(&ones, 1.0, 1.0, n, &ctrl()))?;
    out.push(ComparisonReport::new("orders 1 reduce to srf pmf", Metric::AbsError, err, 1e-8));

    let sym = FsrfModel::type_three(SkellamParams::new(0.8, 0.8)?, 0.8, 0.9, 0.8, 0.9)?;
    let asym = max_abs((1..=8).map(|n| Ok(fsrf3_pmf(&sym, 1.0, 1.2, n, &ctrl())? - fsrf3_pmf(&sym, 1.0, 1.2, -n, &ctrl())?)))?;
    out.push(ComparisonReport::new("symmetric pmf(n) = pmf(-n)", Metric::AbsError, asym, 0.0));

    let m = FsrfModel::type_three(p, 0.7, 0.7, 0.9, 0.9)?;
    let table = fsrf3_pmf_table(&m, 1.0, 1.0, -5, 5, &ctrl())?;
    let draws = run_replicates(cfg, 1, |rng| fsrf3_sample(&m, 1.0, 1.0, rng))?;
    out.push(tv_report("series vs time-change samples", &draws, &table, 0.03)?);
    let pt = GridPoint::new(1.0, 1.0)?;
    let (mean, var, _) = fsrf3_moments(&m, &pt, &pt)?;
    let xs = as_f64(&draws);
    out.push(moment_z_check("mean", &xs, mean, var)?);
    out.push(variance_z_check("variance", &xs, var)?);
    Ok(out)
}

fn theorem31(cfg: &McConfig) -> Result<Vec<ComparisonReport>> {
    let g = GsrfParams::new(vec![(1.0, 2.0), (-1.0, 1.0)])?;
    let mut out = convergence_study(&g, 1.0, 1.0, &[16, 32, 64], cfg, (-30, 30), f64::INFINITY)?;
    let tv: Vec<f64> = out.iter().map(|r| r.value).collect();
    let rise = tv.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    out.push(ComparisonReport::new("tv nonincreasing in k (largest rise)", Metric::Tv, rise.max(0.0), 0.005));
    out.push(ComparisonReport::new("tv at k=64", Metric::Tv, tv[2], 0.05));
    Ok(out)
}

fn governing_equations() -> Result<Vec<ComparisonReport>> {
    let p = SkellamParams::new(2.0, 1.0)?;
    let mut out = Vec::new();
    for (u, s, t) in [(0.2, 1.0, 1.0), (0.25, 1.2, 0.8), (0.3, 0.7, 1.3)] {
        let a = srf_pde_residual(&p, u, s, t, 1e-3)?;
        let b = srf_pde_residual(&p, u, s, t, 5e-4)?;
        for (what, ratio) in [("pgf", a.pgf.abs() / b.pgf.abs()), ("pmf", a.pmf / b.pmf)] {
            out.push(
                ComparisonReport::new(format!("{what} residual ratio at ({u},{s},{t})"), Metric::Richardson, (ratio - 4.0).abs(), 0.5)
                    .with("ratio", ratio),
            );
        }
    }
    Ok(out)
}

fn integrals(cfg: &McConfig) -> Result<Vec<ComparisonReport>> {
    let grid = CfGrid::standard();
    let riemann = IntegralOrders::riemann();
    let mut out = Vec::new();

    let prf = run_replicates(cfg, 1, |rng| rl_integral_sample(1.0, &riemann, 1.0, 1.0, rng))?;
    let emp = empirical_cf(&prf, &grid)?;
    let analytic = grid.xi_values.iter().map(|&xi| prf_integral_cf(1.0, 1.0, 1.0, xi)).collect::<Result<Vec<_>>>()?;
    out.push(ComparisonReport::new("prf integral cf", Metric::CfSup, sup_cf_distance(&emp, &analytic)?, 0.02));

    let scaled = run_replicates(cfg, 2, |rng| scaled_compound_sample(1.0, |_| 1.0, 1.0, 1.0, rng))?;
    let emp_scaled = empirical_cf(&scaled, &grid)?;
    out.push(ComparisonReport::new("scaled compound vs integral", Metric::CfSup, sup_cf_distance(&emp, &emp_scaled)?, 0.02));

    for (tag, (n1, n2)) in [(3u64, (1.0, 1.0)), (4, (0.5, 1.5))] {
        let o = IntegralOrders::new(n1, n2)?;
        let xs = run_replicates(cfg, tag, |rng| rl_integral_sample(1.0, &o, 1.0, 1.0, rng))?;
        let (mean, var) = rl_integral_moments(1.0, &o, 1.0, 1.0)?;
        out.push(moment_z_check(&format!("rl mean nu=({n1},{n2})"), &xs, mean, var)?);
        out.push(variance_z_check(&format!("rl variance nu=({n1},{n2})"), &xs, var)?);
    }

    let g = GsrfParams::new(vec![(1.0, 2.0), (-1.0, 1.0)])?;
    let analytic: Vec<Complex64> = grid.xi_values.iter().map(|&xi| gsrf_integral_cf(&g, 1.0, 1.0, xi)).collect::<Result<_>>()?;
    let direct = run_replicates(cfg, 5, |rng| gsrf_integral_sample(&g, 1.0, 1.0, rng))?;
    let emp = empirical_cf(&direct, &grid)?;
    out.push(ComparisonReport::new("gsrf integral cf", Metric::CfSup, sup_cf_distance(&emp, &analytic)?, 0.02));
    let comp = run_replicates(cfg, 6, |rng| {
        scaled_compound_sample(g.total_rate(), |r: &mut RngStream| g.sample_jump(r), 1.0, 1.0, rng)
    })?;
    let emp = empirical_cf(&comp, &grid)?;
    out.push(ComparisonReport::new("gsrf scaled compound cf", Metric::CfSup, sup_cf_distance(&emp, &analytic)?, 0.02));
    Ok(out)
}

fn fprf(cfg: &McConfig) -> Result<Vec<ComparisonReport>> {
    let (lambda, alpha, beta) = (1.0, 0.7, 0.7);
    let mut out = Vec::new();
    let table = fprf_pmf_table(lambda, alpha, beta, 1.0, 1.0, 10, &ctrl())?;
    let draws = run_replicates(cfg, 1, |rng| Ok(fprf_sample(lambda, alpha, beta, 1.0, 1.0, rng)? as i64))?;
    out.push(tv_report("series vs time-change samples", &draws, &table, 0.02)?);

    let p1 = GridPoint::new(1.0, 1.0)?;
    let p2 = GridPoint::new(1.5, 1.2)?;
    let joint = run_replicates(cfg, 2, |rng| fprf_joint_sample(lambda, alpha, beta, &[p1, p2], DEFAULT_PATH_STEP, rng))?;
    let x1: Vec<f64> = joint.iter().map(|v| v[0] as f64).collect();
    let x2: Vec<f64> = joint.iter().map(|v| v[1] as f64).collect();
    let (m1, v1, cov) = fprf_moments(lambda, alpha, beta, &p1, &p2)?;
    let (m2, v2, _) = fprf_moments(lambda, alpha, beta, &p2, &p2)?;
    out.push(moment_z_check("mean at (1,1)", &x1, m1, v1)?);
    out.push(variance_z_check("variance at (1,1)", &x1, v1)?);
    out.push(moment_z_check("mean at (1.5,1.2)", &x2, m2, v2)?);
    out.push(variance_z_check("variance at (1.5,1.2)", &x2, v2)?);
    out.push(covariance_z_check("covariance", &x1, &x2, cov)?);

    let (_, rs) = inverse_subordinator_cross_moment_checked(alpha, p1.s, p2.s)?;
    let (_, rt) = inverse_subordinator_cross_moment_checked(beta, p1.t, p2.t)?;
    out.push(ComparisonReport::new("covariance quadrature node doubling", Metric::RelChange, rs.max(rt), 1e-9));
    Ok(out)
}

fn specfun() -> Result<Vec<ComparisonReport>> {
    let mut out = Vec::new();
    let mut asym: f64 = 0.0;
    for n in -10..=10 {
        for x in [0.1, 1.0, 5.0] {
            asym = asym.max((bessel_i(n, x)? - bessel_i(-n, x)?).abs());
        }
    }
    out.push(ComparisonReport::new("bessel I_n = I_-n", Metric::AbsError, asym, 0.0));

    let xs: Vec<f64> = (-12..=12).map(|k| 0.25 * k as f64).collect();
    let err = max_abs(xs.iter().map(|&x| Ok(mittag_leffler3(1.0, 1.0, 1.0, x)? - x.exp())))?;
    out.push(ComparisonReport::new("E^1_{1,1}(x) = e^x", Metric::AbsError, err, 1e-12));

    let err = max_abs([0.1, 0.3, 0.5, 0.9, 1.0].map(|a| Ok(mittag_leffler2(a, 0.0)? - 1.0)))?;
    out.push(ComparisonReport::new("E_a(0) = 1", Metric::AbsError, err, 0.0));

    let spec = WrightSpec::new(vec![(1.5, 0.7), (2.0, 1.3)], vec![(1.5, 0.7), (2.0, 1.3)])?;
    let err = max_abs(xs.iter().map(|&x| Ok(wright(&spec, x, &ctrl())? - x.exp())))?;
    out.push(ComparisonReport::new("cancelled Wright = e^x", Metric::AbsError, err, 1e-12));

    let mut outside: f64 = 0.0;
    for (alpha, x_min) in [(0.3, -1.0), (0.5, -3.0), (0.8, -5.0), (1.0, -5.0)] {
        for k in 1..=20 {
            let v = mittag_leffler2(alpha, x_min * k as f64 / 20.0)?;
            outside = outside.max((-v).max(v - 1.0).max(if v == 0.0 { 1.0 } else { 0.0 }));
        }
    }
    out.push(ComparisonReport::new("E_a(x) in (0, 1] for x < 0", Metric::AbsError, outside, 0.0));

    let err = max_abs([0.25, 0.5, 1.0, 1.5, 2.0].map(|x: f64| {
        let target = (x * x).exp() * libm::erfc(x);
        Ok((mittag_leffler2(0.5, -x)? - target) / target)
    }))?;
    out.push(ComparisonReport::new("E_1/2(-x) = e^(x^2) erfc(x), relative", Metric::AbsError, err, 1e-10));
    Ok(out)
}
