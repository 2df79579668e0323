use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CfGrid;
use crate::error::{invalid, Error, Result};
use crate::quadrature::{unit_square, DOUBLING_TOL};
use crate::skellam_field::{check_time, GsrfParams};

/// `exp(s t int_0^1 int_0^1 psi(xi s t x y) dx dy)` for the Riemann integral of a
/// two-parameter Levy field whose unit-box log characteristic function is
/// `psi`, together with the relative change of the exponent between the 64-
/// and 128-node rules.
pub fn levy_integral_cf_checked<F>(log_cf_at_unit: F, s: f64, t: f64, xi: f64) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Complex64,
{
    check_time("s", s)?;
    check_time("t", t)?;
    if !xi.is_finite() {
        return Err(invalid("xi", format!("{xi} is not finite")));
    }
    let st = s * t;
    let coarse: Complex64 = unit_square(64, |x, y| log_cf_at_unit(xi * st * x * y));
    let fine: Complex64 = unit_square(128, |x, y| log_cf_at_unit(xi * st * x * y));
    let change = (fine - coarse).norm() / fine.norm().max(1.0);
    if !(change <= DOUBLING_TOL) {
        return Err(Error::Quadrature { rel_change: change });
    }
    Ok(((fine * st).exp(), change))
}

pub fn levy_integral_cf<F>(log_cf_at_unit: F, s: f64, t: f64, xi: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    Ok(levy_integral_cf_checked(log_cf_at_unit, s, t, xi)?.0)
}

/// Characteristic function of `int_0^s int_0^t N(x, y) dx dy` for a Poisson
/// field of rate `lambda`.
pub fn prf_integral_cf(lambda: f64, s: f64, t: f64, xi: f64) -> Result<Complex64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(invalid("lambda", format!("{lambda} must be positive and finite")));
    }
    levy_integral_cf(|z| lambda * (Complex64::new(0.0, z).exp() - 1.0), s, t, xi)
}

/// `sum_j lambda_j (e^{i xi j} - 1)`, the unit-box log characteristic function
/// of a generalized Skellam field.
pub fn gsrf_log_cf(params: &GsrfParams, xi: f64) -> Complex64 {
    params
        .jumps
        .iter()
        .map(|&(j, l)| l * (Complex64::new(0.0, xi * j).exp() - 1.0))
        .sum()
}

/// Characteristic function of the Riemann integral of a generalized Skellam field.
pub fn gsrf_integral_cf(params: &GsrfParams, s: f64, t: f64, xi: f64) -> Result<Complex64> {
    params.validate()?;
    levy_integral_cf(|z| gsrf_log_cf(params, z), s, t, xi)
}

/// One row of an analytic versus empirical characteristic-function comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CfComparisonRow {
    pub xi: f64,
    pub analytic_re: f64,
    pub analytic_im: f64,
    pub empirical_re: f64,
    pub empirical_im: f64,
    pub abs_error: f64,
}

/// Pairs up values on `grid`; the sup discrepancy is the largest `abs_error`.
pub fn compare_cf(grid: &CfGrid, analytic: &[Complex64], empirical: &[Complex64]) -> Result<Vec<CfComparisonRow>> {
    grid.validate()?;
    if analytic.len() != grid.xi_values.len() || empirical.len() != grid.xi_values.len() {
        return Err(invalid("cf values", "one value per grid point is required"));
    }
    Ok(grid
        .xi_values
        .iter()
        .zip(analytic.iter().zip(empirical))
        .map(|(&xi, (a, e))| CfComparisonRow {
            xi,
            analytic_re: a.re,
            analytic_im: a.im,
            empirical_re: e.re,
            empirical_im: e.im,
            abs_error: (a - e).norm(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_integrals::{rl_integral_moments, IntegralOrders};

    #[test]
    fn unit_at_zero() {
        assert_eq!(prf_integral_cf(1.3, 1.0, 2.0, 0.0).unwrap(), Complex64::new(1.0, 0.0));
        let p = GsrfParams::new(vec![(1.0, 2.0), (-1.0, 1.0)]).unwrap();
        assert_eq!(gsrf_integral_cf(&p, 1.0, 1.0, 0.0).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn levy_specialises_to_prf() {
        for xi in [-2.0, -0.7, 0.3, 1.9] {
            let a = prf_integral_cf(1.4, 1.1, 0.9, xi).unwrap();
            let p = GsrfParams::new(vec![(1.0, 1.4)]).unwrap();
            let b = levy_integral_cf(|z| gsrf_log_cf(&p, z), 1.1, 0.9, xi).unwrap();
            assert!((a - b).norm() < 1e-10);
        }
    }

    /// Independent oracle: the x-integral of `e^{i c x y} - 1` in closed form,
    /// then composite Simpson in `y`.
    fn exponent_oracle(lambda: f64, c: f64) -> Complex64 {
        let inner = |y: f64| -> Complex64 {
            let z = c * y;
            if z.abs() < 1e-8 {
                return Complex64::new(0.0, 0.5 * z);
            }
            (Complex64::new(0.0, z).exp() - 1.0) / Complex64::new(0.0, z) - 1.0
        };
        let n = 2000;
        let h = 1.0 / n as f64;
        let mut acc = inner(0.0) + inner(1.0);
        for k in 1..n {
            acc += inner(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * (h / 3.0) * lambda
    }

    #[test]
    fn matches_closed_form_inner_integral() {
        for (lambda, s, t, xi) in [(1.0, 1.0, 1.0, 1.0), (2.0, 1.5, 0.8, -1.7)] {
            let cf = prf_integral_cf(lambda, s, t, xi).unwrap();
            let expected = (exponent_oracle(lambda, xi * s * t) * (s * t)).exp();
            assert!((cf - expected).norm() < 1e-12, "{cf} vs {expected}");
        }
    }

    #[test]
    fn derivatives_at_zero_give_moments() {
        let (lambda, s, t) = (1.5, 1.2, 0.9);
        let h = 1e-3;
        let f = |xi: f64| prf_integral_cf(lambda, s, t, xi).unwrap();
        let d1 = (f(h) - f(-h)) / (2.0 * h);
        let d2 = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
        let (mean, var) = rl_integral_moments(lambda, &IntegralOrders::riemann(), s, t).unwrap();
        assert!(((d1.im - mean) / mean).abs() < 1e-4, "{} vs {mean}", d1.im);
        let second = -d2.re;
        assert!(((second - (var + mean * mean)) / second).abs() < 1e-4);
    }

    #[test]
    fn conjugate_symmetry() {
        let p = GsrfParams::new(vec![(2.0, 0.5), (-1.0, 1.0)]).unwrap();
        let a = gsrf_integral_cf(&p, 1.0, 1.0, 0.8).unwrap();
        let b = gsrf_integral_cf(&p, 1.0, 1.0, -0.8).unwrap();
        assert!((a - b.conj()).norm() < 1e-14);
    }

    #[test]
    fn comparison_rows() {
        let g = CfGrid::new(vec![0.0, 1.0]).unwrap();
        let a = [Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.5)];
        let e = [Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.2)];
        let rows = compare_cf(&g, &a, &e).unwrap();
        assert_eq!(rows[0].abs_error, 0.0);
        assert!((rows[1].abs_error - 0.3).abs() < 1e-15);
        assert!(compare_cf(&g, &a[..1], &e).is_err());
        let json = serde_json::to_string(&rows).unwrap();
        assert!(json.contains("analytic_re") && json.contains("abs_error"));
    }
}
