use super::{ln_gamma, ln_pow, signed_exp, sum_series, SeriesControl};
use crate::error::{Error, Result};

/// Largest `|x|` accepted by [`bessel_i`].
pub const BESSEL_MAX_ARG: f64 = 50.0;

/// Modified Bessel function of the first kind `I_n(x)` for integer order.
pub fn bessel_i(n: i32, x: f64) -> Result<f64> {
    bessel_i_with(n, x, &SeriesControl::default())
}

pub fn bessel_i_with(n: i32, x: f64, ctrl: &SeriesControl) -> Result<f64> {
    if !x.is_finite() || x.abs() > BESSEL_MAX_ARG {
        return Err(Error::Range {
            function: "bessel_i",
            x,
            limit: BESSEL_MAX_ARG,
        });
    }
    let order = n.unsigned_abs() as usize;
    if x == 0.0 {
        return Ok(if order == 0 { 1.0 } else { 0.0 });
    }
    let half = x.abs() / 2.0;
    let nu = order as f64;
    let sum = sum_series(ctrl, "bessel_i", |k| {
        let (lp, _) = ln_pow(half, 2 * k + order);
        Ok(signed_exp(lp - ln_gamma(k as f64 + 1.0) - ln_gamma(nu + k as f64 + 1.0), 1.0))
    })?;
    // I_n(-x) = (-1)^n I_n(x)
    let sign = if x < 0.0 && order % 2 == 1 { -1.0 } else { 1.0 };
    Ok(sign * sum.value)
}
