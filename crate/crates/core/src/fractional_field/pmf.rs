use serde::{Deserialize, Serialize};

use super::{check_order, FsrfKind, FsrfModel};
use crate::error::{invalid, Error, Result};
use crate::skellam_field::{check_time, neumaier_sum, PmfTable};
use crate::specfun::{
    ln_gamma, mittag_leffler3_scaled, mittag_leffler3_with, rounding_bound, sum_series, wright,
    wright_scaled, Estimate, SeriesControl, WrightSpec,
};

/// Largest `|n|` evaluated by the type III double series.
pub const FSRF3_MAX_ABS_N: i64 = 12;

/// Absolute rounding error tolerated in a single pmf value. The alternating
/// Wright series cancel heavily once the orders drop well below one, so this
/// only rejects values that are useless; callers needing tighter guarantees
/// should read [`SeriesEstimate::rounding_bound`].
pub const PMF_ROUNDING_TOL: f64 = 1e-3;

/// A truncated series value with its term count, a heuristic tail bound
/// (twice the last term kept) and an estimate of the accumulated rounding
/// error of the alternating inner series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesEstimate {
    pub value: f64,
    pub terms: usize,
    pub tail_bound: f64,
    pub rounding_bound: f64,
}

impl SeriesEstimate {
    fn exact(value: f64) -> Self {
        Self {
            value,
            terms: 1,
            tail_bound: 0.0,
            rounding_bound: 0.0,
        }
    }

    fn checked(self, function: &'static str) -> Result<f64> {
        if self.rounding_bound > PMF_ROUNDING_TOL {
            return Err(Error::PrecisionLoss {
                function,
                bound: self.rounding_bound,
            });
        }
        Ok(self.value)
    }
}

fn ln_fact(n: f64) -> f64 {
    ln_gamma(n + 1.0)
}

/// `E[(E_1(s) E_2(t))^m exp(-c E_1(s) E_2(t))] * exp(ln_scale)` for the
/// inverse subordinators of orders `(alpha, beta)`, written as
/// `x^m 2Psi2[(m+1,1),(m+1,1); (m alpha+1, alpha),(m beta+1, beta) | -c x]`
/// with `x = s^alpha t^beta`. The `x^m` factor must be inside `ln_scale`.
fn time_changed_power(m: f64, alpha: f64, beta: f64, cx: f64, ln_scale: f64, ctrl: &SeriesControl) -> Result<Estimate> {
    let spec = WrightSpec {
        upper: vec![(m + 1.0, 1.0), (m + 1.0, 1.0)],
        lower: vec![(m * alpha + 1.0, alpha), (m * beta + 1.0, beta)],
    };
    wright_scaled(&spec, -cx, ln_scale, ctrl)
}

fn check_st(s: f64, t: f64) -> Result<()> {
    check_time("s", s)?;
    check_time("t", t)
}

/// `Pr{N^{alpha,beta}(s,t) = n}` for the fractional Poisson field:
/// `(x^n / n!) 2Psi2[(n+1,1),(n+1,1); (n alpha+1, alpha),(n beta+1, beta) | -x]`,
/// `x = lambda s^alpha t^beta`. Needs `alpha + beta > 1` for the series to converge.
pub fn fprf_pmf(lambda: f64, alpha: f64, beta: f64, s: f64, t: f64, n: u64, ctrl: &SeriesControl) -> Result<f64> {
    fprf_pmf_series(lambda, alpha, beta, s, t, n, ctrl)?.checked("fprf_pmf")
}

/// [`fprf_pmf`] with its rounding bound.
pub fn fprf_pmf_series(
    lambda: f64,
    alpha: f64,
    beta: f64,
    s: f64,
    t: f64,
    n: u64,
    ctrl: &SeriesControl,
) -> Result<SeriesEstimate> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(invalid("lambda", format!("{lambda} must be positive")));
    }
    check_order("alpha", alpha)?;
    check_order("beta", beta)?;
    check_st(s, t)?;
    let x = lambda * s.powf(alpha) * t.powf(beta);
    if x == 0.0 {
        return Ok(SeriesEstimate::exact(if n == 0 { 1.0 } else { 0.0 }));
    }
    let nf = n as f64;
    let ln_scale = nf * x.ln() - ln_fact(nf);
    let spec = WrightSpec {
        upper: vec![(nf + 1.0, 1.0), (nf + 1.0, 1.0)],
        lower: vec![(nf * alpha + 1.0, alpha), (nf * beta + 1.0, beta)],
    };
    let est = wright_scaled(&spec, -x, ln_scale, ctrl)?;
    Ok(SeriesEstimate {
        value: est.value,
        terms: 1,
        tail_bound: 0.0,
        rounding_bound: est.rounding,
    })
}

pub fn fprf_pmf_table(lambda: f64, alpha: f64, beta: f64, s: f64, t: f64, n_max: u64, ctrl: &SeriesControl) -> Result<PmfTable> {
    table(0, n_max as i64, "fprf_pmf", |n| fprf_pmf_series(lambda, alpha, beta, s, t, n as u64, ctrl))
}

/// Type I pmf with its outer-sum truncation details.
pub fn fsrf1_pmf_series(model: &FsrfModel, s: f64, t: f64, n: i64, ctrl: &SeriesControl) -> Result<SeriesEstimate> {
    model.expect(FsrfKind::I)?;
    check_st(s, t)?;
    let (l1, l2) = (model.params.lambda1, model.params.lambda2);
    let (alpha, beta) = (model.orders.alpha, model.orders.beta);
    let x = s.powf(alpha) * t.powf(beta);
    if x == 0.0 {
        return Ok(SeriesEstimate::exact(if n == 0 { 1.0 } else { 0.0 }));
    }
    let a = n.unsigned_abs() as f64;
    let c = l1 + l2;
    let mut rounding = 0.0;
    let ln_ratio = 0.5 * n as f64 * (l1 / l2).ln();
    let ln_base = (0.5 * (l1 * l2).ln()) + x.ln();
    let sum = sum_series(ctrl, "fsrf1_pmf", |k| {
        let kf = k as f64;
        let m = a + 2.0 * kf;
        let ln_scale = ln_ratio + m * ln_base - ln_fact(a + kf) - ln_fact(kf);
        let est = time_changed_power(m, alpha, beta, c * x, ln_scale, ctrl)?;
        rounding += est.rounding;
        Ok(est.value)
    })?;
    Ok(SeriesEstimate {
        value: sum.value,
        terms: sum.terms,
        tail_bound: 2.0 * sum.last_abs_term,
        rounding_bound: rounding,
    })
}

/// `Pr{S^{alpha,beta}(s,t) = n}` for the type I field.
pub fn fsrf1_pmf(model: &FsrfModel, s: f64, t: f64, n: i64, ctrl: &SeriesControl) -> Result<f64> {
    fsrf1_pmf_series(model, s, t, n, ctrl)?.checked("fsrf1_pmf")
}

pub fn fsrf1_pmf_table(model: &FsrfModel, s: f64, t: f64, n_min: i64, n_max: i64, ctrl: &SeriesControl) -> Result<PmfTable> {
    table(n_min, n_max, "fsrf1_pmf", |n| fsrf1_pmf_series(model, s, t, n, ctrl))
}

/// Tabulates a series pmf. Entries pushed below zero by rounding are clamped,
/// and an overshoot of the total mass that the summed rounding bounds account
/// for is removed by rescaling.
fn table<F>(n_min: i64, n_max: i64, function: &'static str, mut f: F) -> Result<PmfTable>
where
    F: FnMut(i64) -> Result<SeriesEstimate>,
{
    if n_min > n_max {
        return Err(invalid("n_min", "must not exceed n_max"));
    }
    let mut probs = Vec::with_capacity((n_max - n_min + 1) as usize);
    let mut bound = 0.0;
    for n in n_min..=n_max {
        let est = f(n)?;
        let p = est.checked(function)?;
        bound += est.rounding_bound;
        probs.push(if p < 0.0 && -p <= est.rounding_bound { 0.0 } else { p });
    }
    let total = neumaier_sum(&probs);
    if total > 1.0 && total - 1.0 <= bound + 1e-9 {
        probs.iter_mut().for_each(|p| *p /= total);
    }
    PmfTable::from_probs(n_min, probs)
}

/// Type I pgf `2Psi2[(1,1),(1,1); (1,alpha),(1,beta) | A s^alpha t^beta]` with
/// `A = l1 (u - 1) + l2 (1/u - 1)`.
pub fn fsrf1_pgf(model: &FsrfModel, u: f64, s: f64, t: f64, ctrl: &SeriesControl) -> Result<f64> {
    model.expect(FsrfKind::I)?;
    check_st(s, t)?;
    check_u("fsrf1_pgf", u)?;
    let (l1, l2) = (model.params.lambda1, model.params.lambda2);
    let a = l1 * (u - 1.0) + l2 * (1.0 / u - 1.0);
    let x = s.powf(model.orders.alpha) * t.powf(model.orders.beta);
    let spec = WrightSpec {
        upper: vec![(1.0, 1.0), (1.0, 1.0)],
        lower: vec![(1.0, model.orders.alpha), (1.0, model.orders.beta)],
    };
    wright(&spec, a * x, ctrl)
}

fn check_u(function: &'static str, u: f64) -> Result<()> {
    if !(u > 0.0 && u <= 1.0) {
        return Err(crate::error::Error::Domain { function, x: u });
    }
    Ok(())
}

/// `Pr{S^alpha(s,t) = n}` for the type II field:
/// `(l1/l2)^(n/2) sum_k m! (sqrt(l1 l2) y)^m / ((|n|+k)! k!) E^{m+1}_{alpha, alpha m + 1}(-(l1+l2) y)`
/// with `m = |n| + 2k`, `y = s^alpha t`.
pub fn fsrf2_pmf(model: &FsrfModel, s: f64, t: f64, n: i64, ctrl: &SeriesControl) -> Result<f64> {
    fsrf2_pmf_series(model, s, t, n, ctrl)?.checked("fsrf2_pmf")
}

/// Type II pmf with its outer-sum truncation details.
pub fn fsrf2_pmf_series(model: &FsrfModel, s: f64, t: f64, n: i64, ctrl: &SeriesControl) -> Result<SeriesEstimate> {
    model.expect(FsrfKind::II)?;
    check_st(s, t)?;
    let (l1, l2) = (model.params.lambda1, model.params.lambda2);
    let alpha = model.orders.alpha;
    let y = s.powf(alpha) * t;
    if y == 0.0 {
        return Ok(SeriesEstimate::exact(if n == 0 { 1.0 } else { 0.0 }));
    }
    let a = n.unsigned_abs() as f64;
    let ln_ratio = 0.5 * n as f64 * (l1 / l2).ln();
    let ln_base = 0.5 * (l1 * l2).ln() + y.ln();
    let arg = -(l1 + l2) * y;
    let mut rounding = 0.0;
    let sum = sum_series(ctrl, "fsrf2_pmf", |k| {
        let kf = k as f64;
        let m = a + 2.0 * kf;
        let ln_scale = ln_ratio + ln_fact(m) + m * ln_base - ln_fact(a + kf) - ln_fact(kf);
        let est = mittag_leffler3_scaled(alpha, alpha * m + 1.0, m + 1.0, arg, ln_scale, ctrl)?;
        rounding += est.rounding;
        Ok(est.value)
    })?;
    Ok(SeriesEstimate {
        value: sum.value,
        terms: sum.terms,
        tail_bound: 2.0 * sum.last_abs_term,
        rounding_bound: rounding,
    })
}

pub fn fsrf2_pmf_table(model: &FsrfModel, s: f64, t: f64, n_min: i64, n_max: i64, ctrl: &SeriesControl) -> Result<PmfTable> {
    table(n_min, n_max, "fsrf2_pmf", |n| fsrf2_pmf_series(model, s, t, n, ctrl))
}

/// Type II pgf `E_{alpha,1}(s^alpha t (l1 (u-1) + l2 (1/u - 1)))`.
pub fn fsrf2_pgf(model: &FsrfModel, u: f64, s: f64, t: f64, ctrl: &SeriesControl) -> Result<f64> {
    model.expect(FsrfKind::II)?;
    check_st(s, t)?;
    check_u("fsrf2_pgf", u)?;
    let (l1, l2) = (model.params.lambda1, model.params.lambda2);
    let y = s.powf(model.orders.alpha) * t;
    mittag_leffler3_with(model.orders.alpha, 1.0, 1.0, y * (l1 * (u - 1.0) + l2 * (1.0 / u - 1.0)), ctrl)
}

/// One component of the type III field: rate and orders.
#[derive(Clone, Copy)]
struct Component {
    lambda: f64,
    alpha: f64,
    beta: f64,
}

/// `Pr{N_a - N_b = n}` for `n >= 0` as the `(r, l)` double series with inner
/// `4Psi5` evaluations. Negative `n` swaps the components, so a symmetric
/// model gives bitwise-symmetric values.
fn fsrf3_branch(a: Component, b: Component, s: f64, t: f64, n: u64, ctrl: &SeriesControl) -> Result<SeriesEstimate> {
    let x1 = a.lambda * s.powf(a.alpha) * t.powf(a.beta);
    let x2 = b.lambda * s.powf(b.alpha) * t.powf(b.beta);
    if x1 == 0.0 || x2 == 0.0 {
        // One component is identically zero; the other is a plain fractional Poisson count.
        let v = if x1 == 0.0 && x2 == 0.0 {
            if n == 0 { 1.0 } else { 0.0 }
        } else if x2 == 0.0 {
            fprf_pmf(a.lambda, a.alpha, a.beta, s, t, n, ctrl)?
        } else if n == 0 {
            fprf_pmf(b.lambda, b.alpha, b.beta, s, t, 0, ctrl)?
        } else {
            0.0
        };
        return Ok(SeriesEstimate::exact(v));
    }
    let z = x1 * x2;
    let nf = n as f64;
    let (ln_x1, ln_x2) = (x1.ln(), x2.ln());
    let mut inner_terms = 0usize;
    let mut rounding = 0.0;
    let outer = sum_series(ctrl, "fsrf3_pmf", |r| {
        let rf = r as f64;
        let p = rf + nf;
        let inner = sum_series(ctrl, "fsrf3_pmf", |l| {
            let lf = l as f64;
            let spec = WrightSpec {
                upper: vec![(p + 1.0, 1.0), (p + 1.0, 1.0), (lf + 1.0, 1.0), (lf + 1.0, 1.0)],
                lower: vec![
                    (nf + 1.0, 1.0),
                    (p * a.alpha + 1.0, a.alpha),
                    (p * a.beta + 1.0, a.beta),
                    (lf * b.alpha + 1.0, b.alpha),
                    (lf * b.beta + 1.0, b.beta),
                ],
            };
            let ln_scale = p * ln_x1 + lf * ln_x2 - ln_fact(rf) - ln_fact(lf);
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            let est = wright_scaled(&spec, z, ln_scale, ctrl)?;
            rounding += est.rounding;
            Ok(sign * est.value)
        })?;
        inner_terms += inner.terms;
        rounding += rounding_bound(inner.abs_sum, 0.0);
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        Ok(sign * inner.value)
    })?;
    Ok(SeriesEstimate {
        value: outer.value,
        terms: inner_terms,
        tail_bound: 2.0 * outer.last_abs_term,
        rounding_bound: rounding + rounding_bound(outer.abs_sum, 0.0),
    })
}

/// Type III pmf with truncation details; `|n| <= FSRF3_MAX_ABS_N`.
pub fn fsrf3_pmf_series(model: &FsrfModel, s: f64, t: f64, n: i64, ctrl: &SeriesControl) -> Result<SeriesEstimate> {
    model.expect(FsrfKind::III)?;
    check_st(s, t)?;
    if n.abs() > FSRF3_MAX_ABS_N {
        return Err(invalid("n", format!("|n| = {} exceeds the series cap {FSRF3_MAX_ABS_N}", n.abs())));
    }
    let (a2, b2) = model.second_orders();
    let first = Component {
        lambda: model.params.lambda1,
        alpha: model.orders.alpha,
        beta: model.orders.beta,
    };
    let second = Component {
        lambda: model.params.lambda2,
        alpha: a2,
        beta: b2,
    };
    if n >= 0 {
        fsrf3_branch(first, second, s, t, n as u64, ctrl)
    } else {
        fsrf3_branch(second, first, s, t, n.unsigned_abs(), ctrl)
    }
}

/// `Pr{S^{alpha,beta}_{alpha2,beta2}(s,t) = n}` for the type III field.
pub fn fsrf3_pmf(model: &FsrfModel, s: f64, t: f64, n: i64, ctrl: &SeriesControl) -> Result<f64> {
    fsrf3_pmf_series(model, s, t, n, ctrl)?.checked("fsrf3_pmf")
}

pub fn fsrf3_pmf_table(model: &FsrfModel, s: f64, t: f64, n_min: i64, n_max: i64, ctrl: &SeriesControl) -> Result<PmfTable> {
    table(n_min, n_max, "fsrf3_pmf", |n| fsrf3_pmf_series(model, s, t, n, ctrl))
}
