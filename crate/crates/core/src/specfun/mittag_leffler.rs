use super::{ln_gamma, ln_pow, term_rounding, signed_exp, sum_series, Estimate, SeriesControl};
use crate::error::{invalid, Error, Result};

/// Largest `|x|` accepted by the Mittag-Leffler evaluators.
pub const ML_MAX_ARG: f64 = 50.0;

/// Three-parameter Mittag-Leffler function
/// `E^gamma_{alpha,beta}(x) = sum_r (gamma)_r x^r / (Gamma(alpha r + beta) r!)`.
pub fn mittag_leffler3(alpha: f64, beta: f64, gamma: f64, x: f64) -> Result<f64> {
    mittag_leffler3_with(alpha, beta, gamma, x, &SeriesControl::default())
}

pub fn mittag_leffler3_with(
    alpha: f64,
    beta: f64,
    gamma: f64,
    x: f64,
    ctrl: &SeriesControl,
) -> Result<f64> {
    mittag_leffler3_scaled(alpha, beta, gamma, x, 0.0, ctrl)?.checked("mittag_leffler")
}

/// Two-parameter form `E_{alpha,1}(x)`.
pub fn mittag_leffler2(alpha: f64, x: f64) -> Result<f64> {
    mittag_leffler3(alpha, 1.0, 1.0, x)
}

/// `exp(ln_scale) * E^gamma_{alpha,beta}(x)`, with the scale folded into every
/// term so large prefactors never overflow on their own.
pub(crate) fn mittag_leffler3_scaled(
    alpha: f64,
    beta: f64,
    gamma: f64,
    x: f64,
    ln_scale: f64,
    ctrl: &SeriesControl,
) -> Result<Estimate> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(invalid("alpha", format!("{alpha} not in (0, 1]")));
    }
    if !(beta > 0.0) {
        return Err(invalid("beta", format!("{beta} must be positive")));
    }
    if !(gamma > 0.0) {
        return Err(invalid("gamma", format!("{gamma} must be positive")));
    }
    if !x.is_finite() || x.abs() > ML_MAX_ARG {
        return Err(Error::Range {
            function: "mittag_leffler",
            x,
            limit: ML_MAX_ARG,
        });
    }
    let ln_gamma_gamma = ln_gamma(gamma);
    let mut rounding = 0.0_f64;
    let sum = sum_series(ctrl, "mittag_leffler", |r| {
        let rf = r as f64;
        let (lp, sign) = ln_pow(x, r);
        let pieces = [
            ln_scale,
            ln_gamma(gamma + rf),
            -ln_gamma_gamma,
            lp,
            -ln_gamma(alpha * rf + beta),
            -ln_gamma(rf + 1.0),
        ];
        let ln_term: f64 = pieces.iter().sum();
        let t = signed_exp(ln_term, sign);
        if ln_term.is_finite() {
            rounding += term_rounding(t, pieces.iter().map(|p| p.abs()).sum());
        }
        Ok(t)
    })?;
    Ok(Estimate {
        value: sum.value,
        rounding,
    })
}
