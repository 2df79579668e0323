use rand::Rng;

use super::IntegralOrders;
use crate::error::{invalid, Result};
use crate::sampling::{sample_point_field, sample_poisson, BoxRegion, PointProcessSample, RngStream};
use crate::skellam_field::{check_time, GsrfParams, PlanarGsrfSample};
use crate::specfun::ln_gamma;

fn check_rate(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(invalid("lambda", format!("{lambda} must be positive and finite")));
    }
    Ok(())
}

/// Closed-form kernel integral of one point at `(x, y)`:
/// `(s-x)^nu1 (t-y)^nu2 / (Gamma(nu1+1) Gamma(nu2+1))`, zero outside `[0,s] x [0,t]`.
pub fn rl_kernel(orders: &IntegralOrders, s: f64, t: f64, x: f64, y: f64) -> f64 {
    if x > s || y > t {
        return 0.0;
    }
    let ln_norm = ln_gamma(orders.nu1 + 1.0) + ln_gamma(orders.nu2 + 1.0);
    (s - x).powf(orders.nu1) * (t - y).powf(orders.nu2) * (-ln_norm).exp()
}

/// Riemann-Liouville integral of the counting field of a planar scatter.
pub fn rl_integral_of_scatter(sample: &PointProcessSample, orders: &IntegralOrders, s: f64, t: f64) -> Result<f64> {
    orders.validate()?;
    check_time("s", s)?;
    check_time("t", t)?;
    if sample.region.dims() != 2 {
        return Err(invalid("sample", "scatter must be planar"));
    }
    Ok(sample
        .points
        .iter()
        .fold(0.0, |acc, p| acc + rl_kernel(orders, s, t, p[0], p[1])))
}

/// One exact draw of `X^{nu1,nu2}(s, t)` for a Poisson field of rate `lambda`.
pub fn rl_integral_sample(lambda: f64, orders: &IntegralOrders, s: f64, t: f64, rng: &mut RngStream) -> Result<f64> {
    check_rate(lambda)?;
    orders.validate()?;
    let region = BoxRegion::rectangle(s, t)?;
    if region.measure() == 0.0 {
        return Ok(0.0);
    }
    let sample = sample_point_field(lambda, &region, rng)?;
    rl_integral_of_scatter(&sample, orders, s, t)
}

/// `(mean, var)` of the Riemann-Liouville integral of a field whose jumps have
/// first and second moment rates `m1`, `m2`.
fn rl_moments_for_rates(m1: f64, m2: f64, orders: &IntegralOrders, s: f64, t: f64) -> Result<(f64, f64)> {
    orders.validate()?;
    check_time("s", s)?;
    check_time("t", t)?;
    let (n1, n2) = (orders.nu1, orders.nu2);
    let mean = m1 * s.powf(n1 + 1.0) * t.powf(n2 + 1.0) * (-(ln_gamma(n1 + 2.0) + ln_gamma(n2 + 2.0))).exp();
    let ln_den = (2.0 * n1 + 1.0).ln() + (2.0 * n2 + 1.0).ln() + 2.0 * ln_gamma(n1 + 1.0) + 2.0 * ln_gamma(n2 + 1.0);
    let var = m2 * s.powf(2.0 * n1 + 1.0) * t.powf(2.0 * n2 + 1.0) * (-ln_den).exp();
    Ok((mean, var))
}

/// `(mean, var)` of `X^{nu1,nu2}(s, t)`: the mean is
/// `lambda s^(nu1+1) t^(nu2+1) / (Gamma(nu1+2) Gamma(nu2+2))` and the variance
/// `lambda s^(2nu1+1) t^(2nu2+1) / prod (2nu_i+1) Gamma(nu_i+1)^2`, the integral of
/// the squared kernel.
pub fn rl_integral_moments(lambda: f64, orders: &IntegralOrders, s: f64, t: f64) -> Result<(f64, f64)> {
    check_rate(lambda)?;
    rl_moments_for_rates(lambda, lambda, orders, s, t)
}

/// Riemann-Liouville integral of a planar generalized Skellam field.
pub fn gsrf_integral_of_scatter(field: &PlanarGsrfSample, orders: &IntegralOrders, s: f64, t: f64) -> Result<f64> {
    let mut v = 0.0;
    for (j, sample) in &field.components {
        v += j * rl_integral_of_scatter(sample, orders, s, t)?;
    }
    Ok(v)
}

/// One exact draw of the Riemann integral `int_0^s int_0^t S(x, y) dx dy`.
pub fn gsrf_integral_sample(params: &GsrfParams, s: f64, t: f64, rng: &mut RngStream) -> Result<f64> {
    params.validate()?;
    let region = BoxRegion::rectangle(s, t)?;
    if region.measure() == 0.0 {
        return Ok(0.0);
    }
    let orders = IntegralOrders::riemann();
    let mut v = 0.0;
    for &(j, l) in &params.jumps {
        let sample = sample_point_field(l, &region, rng)?;
        v += j * rl_integral_of_scatter(&sample, &orders, s, t)?;
    }
    Ok(v)
}

/// `(mean, var)` of the Riemann-Liouville integral of a generalized Skellam
/// field: the Poisson forms with `lambda` replaced by `sum j lambda_j` and
/// `sum j^2 lambda_j`.
pub fn gsrf_integral_moments(params: &GsrfParams, orders: &IntegralOrders, s: f64, t: f64) -> Result<(f64, f64)> {
    params.validate()?;
    rl_moments_for_rates(params.first_moment_rate(), params.second_moment_rate(), orders, s, t)
}

/// `s t sum_{r <= N} X_r U_r` with `N ~ Poisson(lambda s t)` and `U_r` the product
/// of the coordinates of a uniform point on the unit square.
pub fn scaled_compound_sample<F>(lambda: f64, mut jump_law: F, s: f64, t: f64, rng: &mut RngStream) -> Result<f64>
where
    F: FnMut(&mut RngStream) -> f64,
{
    check_rate(lambda)?;
    check_time("s", s)?;
    check_time("t", t)?;
    let st = s * t;
    let n = sample_poisson(lambda * st, rng)?;
    let mut acc = 0.0;
    for _ in 0..n {
        let x = jump_law(rng);
        let u = rng.random::<f64>() * rng.random::<f64>();
        acc += x * u;
    }
    Ok(st * acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skellam_field::sample_planar_gsrf;

    fn mean_var(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        (m, xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0))
    }

    fn scatter(points: Vec<Vec<f64>>, s: f64, t: f64) -> PointProcessSample {
        PointProcessSample {
            region: BoxRegion::rectangle(s, t).unwrap(),
            points,
            rate: 1.0,
        }
    }

    #[test]
    fn trivial_scatters() {
        let o = IntegralOrders::riemann();
        assert_eq!(rl_integral_of_scatter(&scatter(vec![], 1.0, 1.0), &o, 1.0, 1.0).unwrap(), 0.0);
        let v = rl_integral_of_scatter(&scatter(vec![vec![0.0, 0.0]], 2.0, 3.0), &o, 2.0, 3.0).unwrap();
        assert!((v - 6.0).abs() < 1e-15);
    }

    /// Riemann sum on a square mesh: kernel at cell midpoints times the cell
    /// average of the step field `N(x, y)`.
    fn mesh_integral(sample: &PointProcessSample, nu1: f64, nu2: f64, s: f64, t: f64, cells: usize) -> f64 {
        let (hx, hy) = (s / cells as f64, t / cells as f64);
        let norm = libm::tgamma(nu1) * libm::tgamma(nu2);
        let mut acc = 0.0;
        for i in 0..cells {
            let x = (i as f64 + 0.5) * hx;
            for j in 0..cells {
                let y = (j as f64 + 0.5) * hy;
                let n: f64 = sample
                    .points
                    .iter()
                    .map(|p| {
                        let fx = ((x + 0.5 * hx - p[0]) / hx).clamp(0.0, 1.0);
                        let fy = ((y + 0.5 * hy - p[1]) / hy).clamp(0.0, 1.0);
                        fx * fy
                    })
                    .sum();
                acc += (s - x).powf(nu1 - 1.0) * (t - y).powf(nu2 - 1.0) * n;
            }
        }
        acc * hx * hy / norm
    }

    #[test]
    fn pathwise_matches_mesh_quadrature() {
        let mut rng = RngStream::new(3, 0);
        let region = BoxRegion::rectangle(1.0, 1.5).unwrap();
        let sample = sample_point_field(4.0, &region, &mut rng).unwrap();
        assert!(sample.count() > 0);
        for (n1, n2) in [(1.0, 1.0), (2.0, 2.0), (1.5, 2.0)] {
            let o = IntegralOrders::new(n1, n2).unwrap();
            let exact = rl_integral_of_scatter(&sample, &o, 1.0, 1.5).unwrap();
            let mesh = mesh_integral(&sample, n1, n2, 1.0, 1.5, 512);
            assert!(((exact - mesh) / exact).abs() < 1e-3, "{n1},{n2}: {exact} vs {mesh}");
        }
    }

    #[test]
    fn moments_formulae() {
        let (m, v) = rl_integral_moments(1.0, &IntegralOrders::riemann(), 1.0, 1.0).unwrap();
        assert!((m - 0.25).abs() < 1e-15);
        assert!((v - 1.0 / 9.0).abs() < 1e-15);
        let o = IntegralOrders::new(0.5, 1.5).unwrap();
        let (m1, v1) = rl_integral_moments(1.0, &o, 1.3, 0.7).unwrap();
        let (m2, v2) = rl_integral_moments(2.0, &o, 1.3, 0.7).unwrap();
        assert!((m2 - 2.0 * m1).abs() < 1e-15 && (v2 - 2.0 * v1).abs() < 1e-15);
    }

    #[test]
    fn moments_match_mc() {
        for (n1, n2) in [(1.0, 1.0), (0.5, 1.5)] {
            let o = IntegralOrders::new(n1, n2).unwrap();
            let mut rng = RngStream::new(11, 0);
            let xs: Vec<f64> = (0..40_000).map(|_| rl_integral_sample(1.0, &o, 1.0, 1.0, &mut rng).unwrap()).collect();
            let (m, v) = mean_var(&xs);
            let (em, ev) = rl_integral_moments(1.0, &o, 1.0, 1.0).unwrap();
            assert!((m - em).abs() < 4.0 * (ev / xs.len() as f64).sqrt(), "{m} vs {em}");
            assert!((v - ev).abs() < 0.05 * ev, "{v} vs {ev}");
        }
    }

    #[test]
    fn gsrf_integral_single_jump_is_rl() {
        let p = GsrfParams::new(vec![(1.0, 1.5)]).unwrap();
        let mut a = RngStream::new(5, 1);
        let mut b = RngStream::new(5, 1);
        for _ in 0..50 {
            let x = gsrf_integral_sample(&p, 1.0, 1.2, &mut a).unwrap();
            let y = rl_integral_sample(1.5, &IntegralOrders::riemann(), 1.0, 1.2, &mut b).unwrap();
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn gsrf_integral_mean() {
        let p = GsrfParams::new(vec![(1.0, 2.0), (-1.0, 1.0)]).unwrap();
        let mut rng = RngStream::new(8, 0);
        let xs: Vec<f64> = (0..40_000).map(|_| gsrf_integral_sample(&p, 1.0, 1.0, &mut rng).unwrap()).collect();
        let (m, _) = mean_var(&xs);
        let (em, ev) = gsrf_integral_moments(&p, &IntegralOrders::riemann(), 1.0, 1.0).unwrap();
        assert!((em - 0.25).abs() < 1e-15);
        assert!((m - em).abs() < 4.0 * (ev / xs.len() as f64).sqrt());
    }

    #[test]
    fn planar_gsrf_integral_consistent() {
        let p = GsrfParams::new(vec![(2.0, 1.0), (-1.0, 0.5)]).unwrap();
        let mut rng = RngStream::new(2, 2);
        let field = sample_planar_gsrf(&p, 1.0, 1.0, &mut rng).unwrap();
        let o = IntegralOrders::riemann();
        let direct = gsrf_integral_of_scatter(&field, &o, 1.0, 1.0).unwrap();
        let by_hand: f64 = field
            .components
            .iter()
            .map(|(j, s)| j * s.points.iter().map(|q| (1.0 - q[0]) * (1.0 - q[1])).sum::<f64>())
            .sum();
        assert!((direct - by_hand).abs() < 1e-12);
    }

    #[test]
    fn scaled_compound_zero_area() {
        let mut rng = RngStream::new(1, 0);
        assert_eq!(scaled_compound_sample(1.0, |_| 1.0, 0.0, 1.0, &mut rng).unwrap(), 0.0);
        assert!(scaled_compound_sample(0.0, |_| 1.0, 1.0, 1.0, &mut rng).is_err());
    }
}
