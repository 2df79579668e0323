use super::{check_order, FsrfKind, FsrfModel};
use crate::error::{invalid, Result};
use crate::quadrature::singular_kernel_integral_checked;
use crate::skellam_field::check_time;
use crate::skellam_field::GridPoint;
use crate::specfun::ln_gamma;

fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// `E E^alpha(t) = t^alpha / Gamma(alpha + 1)`.
pub fn inverse_subordinator_mean(alpha: f64, t: f64) -> Result<f64> {
    check_order("alpha", alpha)?;
    check_time("t", t)?;
    Ok(t.powf(alpha) / gamma(alpha + 1.0))
}

/// `E E^alpha(t)^2 = 2 t^(2 alpha) / Gamma(2 alpha + 1)`.
pub fn inverse_subordinator_second_moment(alpha: f64, t: f64) -> Result<f64> {
    check_order("alpha", alpha)?;
    check_time("t", t)?;
    Ok(2.0 * t.powf(2.0 * alpha) / gamma(2.0 * alpha + 1.0))
}

/// `E[E^alpha(s) E^alpha(s')]` with the relative change between the 64- and
/// 128-node rules used for its two singular integrals.
///
/// `E[E(s) E(s')] = (T(s) + T(s')) / (Gamma(alpha) Gamma(alpha + 1))` with
/// `T(c) = int_0^{s ∧ s'} (c - x)^alpha x^(alpha - 1) dx`.
pub fn inverse_subordinator_cross_moment_checked(alpha: f64, s: f64, s2: f64) -> Result<(f64, f64)> {
    check_order("alpha", alpha)?;
    check_time("s", s)?;
    check_time("s2", s2)?;
    let m = s.min(s2);
    let (t1, r1) = singular_kernel_integral_checked(alpha, s, m)?;
    let (t2, r2) = singular_kernel_integral_checked(alpha, s2, m)?;
    Ok(((t1 + t2) / (gamma(alpha) * gamma(alpha + 1.0)), r1.max(r2)))
}

/// As [`inverse_subordinator_cross_moment_checked`], failing when the
/// node-doubling change exceeds the quadrature tolerance.
pub fn inverse_subordinator_cross_moment(alpha: f64, s: f64, s2: f64) -> Result<f64> {
    let (v, rel) = inverse_subordinator_cross_moment_checked(alpha, s, s2)?;
    if rel > crate::quadrature::DOUBLING_TOL {
        return Err(crate::error::Error::Quadrature { rel_change: rel });
    }
    Ok(v)
}

/// Moments of `F(E_1(s), E_2(t))` for a planar field `F` whose conditional mean
/// is `drift * area` and whose conditional covariance on nested rectangles is
/// `diffusion * |intersection|`.
fn time_changed(drift: f64, diffusion: f64, alpha: f64, beta: f64, p1: &GridPoint, p2: &GridPoint) -> Result<(f64, f64, f64)> {
    for p in [p1, p2] {
        check_time("s", p.s)?;
        check_time("t", p.t)?;
    }
    let m1 = inverse_subordinator_mean(alpha, p1.s)?;
    let n1 = inverse_subordinator_mean(beta, p1.t)?;
    let m2 = inverse_subordinator_mean(alpha, p2.s)?;
    let n2 = inverse_subordinator_mean(beta, p2.t)?;
    let mean = drift * m1 * n1;
    let var = diffusion * m1 * n1
        + drift * drift
            * (inverse_subordinator_second_moment(alpha, p1.s)? * inverse_subordinator_second_moment(beta, p1.t)?
                - (m1 * n1).powi(2));
    let meet = p1.meet(p2);
    let cov = diffusion * inverse_subordinator_mean(alpha, meet.s)? * inverse_subordinator_mean(beta, meet.t)?
        + drift * drift
            * (inverse_subordinator_cross_moment(alpha, p1.s, p2.s)?
                * inverse_subordinator_cross_moment(beta, p1.t, p2.t)?
                - m1 * n1 * m2 * n2);
    Ok((mean, var, cov))
}

fn check_rate(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(invalid("lambda", format!("{lambda} must be positive")));
    }
    Ok(())
}

/// `(E N(p1), Var N(p1), Cov(N(p1), N(p2)))` of the fractional Poisson field.
pub fn fprf_moments(lambda: f64, alpha: f64, beta: f64, p1: &GridPoint, p2: &GridPoint) -> Result<(f64, f64, f64)> {
    check_rate(lambda)?;
    check_order("beta", beta)?;
    time_changed(lambda, lambda, alpha, beta, p1, p2)
}

/// `(mean, variance, covariance)` of the type I field.
pub fn fsrf1_moments(model: &FsrfModel, p1: &GridPoint, p2: &GridPoint) -> Result<(f64, f64, f64)> {
    model.expect(FsrfKind::I)?;
    let (l1, l2) = (model.params.lambda1, model.params.lambda2);
    time_changed(l1 - l2, l1 + l2, model.orders.alpha, model.orders.beta, p1, p2)
}

/// `(mean, variance)` of the type II field.
pub fn fsrf2_moments(model: &FsrfModel, s: f64, t: f64) -> Result<(f64, f64)> {
    model.expect(FsrfKind::II)?;
    let (l1, l2) = (model.params.lambda1, model.params.lambda2);
    let p = GridPoint::new(s, t)?;
    let (m, v, _) = time_changed(l1 - l2, l1 + l2, model.orders.alpha, 1.0, &p, &p)?;
    Ok((m, v))
}

/// `(mean, variance, covariance)` of the type III field, the difference of two
/// independent fractional Poisson fields.
pub fn fsrf3_moments(model: &FsrfModel, p1: &GridPoint, p2: &GridPoint) -> Result<(f64, f64, f64)> {
    model.expect(FsrfKind::III)?;
    let (a2, b2) = model.second_orders();
    let (m1, v1, c1) = fprf_moments(model.params.lambda1, model.orders.alpha, model.orders.beta, p1, p2)?;
    let (m2, v2, c2) = fprf_moments(model.params.lambda2, a2, b2, p1, p2)?;
    Ok((m1 - m2, v1 + v2, c1 + c2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skellam_field::SkellamParams;

    fn pt(s: f64, t: f64) -> GridPoint {
        GridPoint::new(s, t).unwrap()
    }

    #[test]
    fn poisson_reduction() {
        let (m, v, c) = fprf_moments(1.0, 1.0, 1.0, &pt(1.0, 1.0), &pt(1.0, 1.0)).unwrap();
        assert!((m - 1.0).abs() < 1e-14 && (v - 1.0).abs() < 1e-12 && (c - 1.0).abs() < 1e-12);
        let (_, _, c) = fprf_moments(2.0, 1.0, 1.0, &pt(1.0, 2.0), &pt(1.5, 0.5)).unwrap();
        assert!((c - 2.0 * 1.0 * 0.5).abs() < 1e-12);
    }

    #[test]
    fn half_order_mean() {
        let (m, _, _) = fprf_moments(1.0, 0.5, 0.5, &pt(1.0, 1.0), &pt(1.0, 1.0)).unwrap();
        assert!((m - 4.0 / std::f64::consts::PI).abs() < 1e-14);
        let model = FsrfModel::type_one(SkellamParams::new(2.0, 1.0).unwrap(), 0.5, 0.5).unwrap();
        let (m, v, _) = fsrf1_moments(&model, &pt(1.0, 1.0), &pt(1.0, 1.0)).unwrap();
        assert!((m - 4.0 / std::f64::consts::PI).abs() < 1e-12);
        let pi = std::f64::consts::PI;
        let expect = 3.0 * 4.0 / pi + (4.0 / 1.0 - 16.0 / (pi * pi));
        assert!((v - expect).abs() < 1e-12, "{v} vs {expect}");
    }

    #[test]
    fn covariance_at_coincident_points_is_variance() {
        for &(a, b) in &[(0.7, 0.7), (0.5, 0.9), (0.3, 1.0)] {
            for &p in &[pt(1.0, 1.0), pt(1.5, 1.2), pt(0.4, 2.0)] {
                let (_, v, c) = fprf_moments(1.3, a, b, &p, &p).unwrap();
                assert!((v - c).abs() < 1e-10 * v, "{a} {b}: {v} vs {c}");
            }
        }
    }

    #[test]
    fn cross_moment_integer_order() {
        assert!((inverse_subordinator_cross_moment(1.0, 1.0, 1.5).unwrap() - 1.5).abs() < 1e-14);
        let (_, rel) = inverse_subordinator_cross_moment_checked(0.7, 1.0, 1.5).unwrap();
        assert!(rel < 1e-9);
    }

    #[test]
    fn integer_order_skellam_reduction() {
        let p = SkellamParams::new(2.0, 1.0).unwrap();
        let m = FsrfModel::type_one(p, 1.0, 1.0).unwrap();
        let (mean, var, cov) = fsrf1_moments(&m, &pt(1.2, 0.9), &pt(0.7, 1.4)).unwrap();
        assert!((mean - 1.2 * 0.9).abs() < 1e-12);
        assert!((var - 3.0 * 1.2 * 0.9).abs() < 1e-12);
        assert!((cov - 3.0 * 0.7 * 0.9).abs() < 1e-12);
        let m = FsrfModel::type_two(p, 1.0).unwrap();
        let (mean, var) = fsrf2_moments(&m, 1.3, 0.8).unwrap();
        assert!((mean - 1.04).abs() < 1e-12 && (var - 3.0 * 1.04).abs() < 1e-12);
        let m = FsrfModel::type_three(p, 1.0, 1.0, 1.0, 1.0).unwrap();
        let (mean, var, cov) = fsrf3_moments(&m, &pt(1.0, 1.0), &pt(1.5, 0.5)).unwrap();
        assert!((mean - 1.0).abs() < 1e-12 && (var - 3.0).abs() < 1e-12 && (cov - 1.5).abs() < 1e-12);
    }

    #[test]
    fn balanced_rates_have_zero_mean() {
        let p = SkellamParams::new(1.5, 1.5).unwrap();
        for &(a, b) in &[(0.3, 0.4), (0.8, 1.0)] {
            let m = FsrfModel::type_one(p, a, b).unwrap();
            assert_eq!(fsrf1_moments(&m, &pt(1.0, 1.0), &pt(1.0, 1.0)).unwrap().0, 0.0);
        }
        let m = FsrfModel::type_three(p, 0.6, 0.7, 0.6, 0.7).unwrap();
        assert_eq!(fsrf3_moments(&m, &pt(1.0, 1.0), &pt(1.0, 1.0)).unwrap().0, 0.0);
        let m = FsrfModel::type_two(p, 0.6).unwrap();
        assert_eq!(fsrf2_moments(&m, 1.0, 1.0).unwrap().0, 0.0);
    }

    #[test]
    fn type_two_half_order() {
        let m = FsrfModel::type_two(SkellamParams::new(2.0, 1.0).unwrap(), 0.5).unwrap();
        let (mean, _) = fsrf2_moments(&m, 1.0, 1.0).unwrap();
        assert!((mean - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn fractional_mean_decreases_with_gamma_product() {
        // (l1 - l2)/(Gamma(a+1) Gamma(b+1)) ordered by the gamma product.
        let p = SkellamParams::new(2.0, 1.0).unwrap();
        let mut rows = Vec::new();
        for i in 1..=10 {
            for j in 1..=10 {
                let (a, b) = (i as f64 / 10.0, j as f64 / 10.0);
                let m = FsrfModel::type_one(p, a, b).unwrap();
                let mean = fsrf1_moments(&m, &pt(1.0, 1.0), &pt(1.0, 1.0)).unwrap().0;
                rows.push((gamma(a + 1.0) * gamma(b + 1.0), mean));
            }
        }
        rows.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        for w in rows.windows(2) {
            if w[1].0 > w[0].0 * (1.0 + 1e-12) {
                assert!(w[1].1 < w[0].1);
            }
        }
    }
}
