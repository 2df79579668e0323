use serde::{Deserialize, Serialize};

use super::{check_order, fsrf1_pgf, FsrfKind, FsrfModel};
use crate::error::{invalid, Result};
use crate::sampling::{
    count_at, sample_inverse_subordinator, sample_inverse_subordinator_path, sample_point_field,
    sample_poisson, BoxRegion, RngStream,
};
use crate::skellam_field::{check_time, pgf_unchecked, srf_pde_residual, GridPoint, PdeResidual};
use crate::specfun::SeriesControl;

/// `N(E_1^alpha(s), E_2^beta(t))` for a Poisson field of rate `lambda`.
pub fn fprf_sample(lambda: f64, alpha: f64, beta: f64, s: f64, t: f64, rng: &mut RngStream) -> Result<u64> {
    check_order("beta", beta)?;
    let e1 = sample_inverse_subordinator(alpha, s, rng)?;
    let e2 = sample_inverse_subordinator(beta, t, rng)?;
    sample_poisson(lambda * e1 * e2, rng)
}

/// Joint draw of the fractional Poisson field at several points.
///
/// Each axis gets one discretised inverse-subordinator path (step `step`)
/// evaluated at all requested coordinates, and a single Poisson scatter on
/// `[0, max E_1] x [0, max E_2]` is counted below each time-changed corner.
pub fn fprf_joint_sample(
    lambda: f64,
    alpha: f64,
    beta: f64,
    points: &[GridPoint],
    step: f64,
    rng: &mut RngStream,
) -> Result<Vec<u64>> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(invalid("lambda", format!("{lambda} must be positive")));
    }
    check_order("alpha", alpha)?;
    check_order("beta", beta)?;
    let axis = |coords: Vec<f64>, order: f64, rng: &mut RngStream| -> Result<(Vec<f64>, Vec<f64>)> {
        let mut grid = coords;
        grid.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
        grid.dedup();
        let values = sample_inverse_subordinator_path(order, &grid, step, rng)?;
        Ok((grid, values))
    };
    for p in points {
        check_time("s", p.s)?;
        check_time("t", p.t)?;
    }
    let (sg, sv) = axis(points.iter().map(|p| p.s).collect(), alpha, rng)?;
    let (tg, tv) = axis(points.iter().map(|p| p.t).collect(), beta, rng)?;
    let lookup = |grid: &[f64], vals: &[f64], x: f64| vals[grid.partition_point(|&g| g < x)];
    let e1_max = sv.last().copied().unwrap_or(0.0);
    let e2_max = tv.last().copied().unwrap_or(0.0);
    let region = BoxRegion::rectangle(e1_max, e2_max)?;
    let scatter = sample_point_field(lambda, &region, rng)?;
    points
        .iter()
        .map(|p| {
            let corner = [lookup(&sg, &sv, p.s), lookup(&tg, &tv, p.t)];
            Ok(count_at(&scatter, &corner)? as u64)
        })
        .collect()
}

/// Skellam count on a rectangle of the given (random) area.
fn skellam_on_area(l1: f64, l2: f64, area: f64, rng: &mut RngStream) -> Result<i64> {
    let a = sample_poisson(l1 * area, rng)? as i64;
    let b = sample_poisson(l2 * area, rng)? as i64;
    Ok(a - b)
}

/// `S(E_1^alpha(s), E_2^beta(t))`.
pub fn fsrf1_sample(model: &FsrfModel, s: f64, t: f64, rng: &mut RngStream) -> Result<i64> {
    model.expect(FsrfKind::I)?;
    let e1 = sample_inverse_subordinator(model.orders.alpha, s, rng)?;
    let e2 = sample_inverse_subordinator(model.orders.beta, t, rng)?;
    skellam_on_area(model.params.lambda1, model.params.lambda2, e1 * e2, rng)
}

/// `S(E^alpha(s), t)`.
pub fn fsrf2_sample(model: &FsrfModel, s: f64, t: f64, rng: &mut RngStream) -> Result<i64> {
    model.expect(FsrfKind::II)?;
    check_time("t", t)?;
    let e = sample_inverse_subordinator(model.orders.alpha, s, rng)?;
    skellam_on_area(model.params.lambda1, model.params.lambda2, e * t, rng)
}

/// `N_1^{alpha,beta}(s,t) - N_2^{alpha2,beta2}(s,t)` with independent time changes.
pub fn fsrf3_sample(model: &FsrfModel, s: f64, t: f64, rng: &mut RngStream) -> Result<i64> {
    model.expect(FsrfKind::III)?;
    let (a2, b2) = model.second_orders();
    let n1 = fprf_sample(model.params.lambda1, model.orders.alpha, model.orders.beta, s, t, rng)? as i64;
    let n2 = fprf_sample(model.params.lambda2, a2, b2, s, t, rng)? as i64;
    Ok(n1 - n2)
}

/// Checks on the type I pgf: the integer-order governing-equation residual and
/// a Monte Carlo average of `G(u, E_1(s), E_2(t))` against the series pgf.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fsrf1PgfCheck {
    /// Finite-difference residuals; present only when `alpha = beta = 1`.
    pub pde: Option<PdeResidual>,
    pub series_pgf: f64,
    pub mc_pgf: f64,
    pub mc_std_error: f64,
    /// `|mc_pgf - series_pgf| / mc_std_error` (0 when the average is exact).
    pub z: f64,
}

/// Residuals of the type I pgf: the plain-field PDE when both orders are 1,
/// and for any orders the time-change mixture
/// `E exp(A E_1(s) E_2(t))`, `A = l1 (u-1) + l2 (1/u - 1)`, averaged over
/// `replicates` draws from stream ids `0..replicates` of `seed`.
pub fn fsrf1_pgf_pde_residual(
    model: &FsrfModel,
    u: f64,
    s: f64,
    t: f64,
    h: f64,
    replicates: usize,
    seed: u64,
) -> Result<Fsrf1PgfCheck> {
    model.expect(FsrfKind::I)?;
    if replicates == 0 {
        return Err(invalid("replicates", "must be at least 1"));
    }
    let integer = model.orders.alpha == 1.0 && model.orders.beta == 1.0;
    let pde = if integer {
        Some(srf_pde_residual(&model.params, u, s, t, h)?)
    } else {
        None
    };
    let series_pgf = fsrf1_pgf(model, u, s, t, &SeriesControl::default())?;
    let draws = (0..replicates)
        .map(|i| {
            let mut rng = RngStream::new(seed, i as u64);
            let e1 = sample_inverse_subordinator(model.orders.alpha, s, &mut rng)?;
            let e2 = sample_inverse_subordinator(model.orders.beta, t, &mut rng)?;
            Ok(pgf_unchecked(&model.params, u, e1 * e2))
        })
        .collect::<Result<Vec<f64>>>()?;
    let n = draws.len() as f64;
    let mean = draws.iter().sum::<f64>() / n;
    let var = if draws.len() > 1 {
        draws.iter().map(|g| (g - mean) * (g - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let se = (var / n).sqrt();
    let diff = (mean - series_pgf).abs();
    let z = if se > 0.0 { diff / se } else if diff < 1e-12 { 0.0 } else { f64::INFINITY };
    Ok(Fsrf1PgfCheck {
        pde,
        series_pgf,
        mc_pgf: mean,
        mc_std_error: se,
        z,
    })
}
