use crate::error::{Error, Result};

/// Natural log of `Gamma(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "log_gamma",
            x,
        });
    }
    Ok(ln_gamma(x))
}

/// Unchecked `ln Gamma(x)`; callers guarantee `x > 0`.
#[inline]
pub(crate) fn ln_gamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

/// `(ln|Gamma(x)|, sign Gamma(x))` for any real `x` off the poles.
pub(crate) fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if x <= 0.0 && x == x.floor() {
        return Err(Error::Pole { arg: x });
    }
    let (v, s) = libm::lgamma_r(x);
    Ok((v, if s < 0 { -1.0 } else { 1.0 }))
}
