use serde::{Deserialize, Serialize};

use super::{
    ln_gamma, ln_gamma_signed, ln_pow, signed_exp, term_rounding, sum_series, Estimate, SeriesControl,
};
use crate::error::{invalid, Error, Result};

/// Largest `|x|` accepted by [`wright`].
pub const WRIGHT_MAX_ARG: f64 = 20.0;

/// Parameter pairs `(a_i, alpha_i)` and `(b_j, beta_j)` of `pPsi_q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WrightSpec {
    pub upper: Vec<(f64, f64)>,
    pub lower: Vec<(f64, f64)>,
}

impl WrightSpec {
    pub fn new(upper: Vec<(f64, f64)>, lower: Vec<(f64, f64)>) -> Result<Self> {
        let spec = Self { upper, lower };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for &(a, al) in &self.upper {
            if !a.is_finite() || !al.is_finite() || al == 0.0 {
                return Err(invalid("upper", format!("bad pair ({a}, {al})")));
            }
        }
        for &(b, be) in &self.lower {
            if !b.is_finite() || !be.is_finite() || be == 0.0 {
                return Err(invalid("lower", format!("bad pair ({b}, {be})")));
            }
        }
        let delta = self.convergence_margin();
        if !(delta > 0.0) {
            return Err(Error::DivergentSeries { value: delta });
        }
        Ok(())
    }

    /// `sum beta_j - sum alpha_i + 1`; the series is entire when positive.
    pub fn convergence_margin(&self) -> f64 {
        let sb: f64 = self.lower.iter().map(|p| p.1).sum();
        let sa: f64 = self.upper.iter().map(|p| p.1).sum();
        sb - sa + 1.0
    }
}

/// Generalized Wright function
/// `sum_n prod Gamma(a_i + n alpha_i) x^n / (prod Gamma(b_j + n beta_j) n!)`.
pub fn wright(spec: &WrightSpec, x: f64, ctrl: &SeriesControl) -> Result<f64> {
    wright_scaled(spec, x, 0.0, ctrl)?.checked("wright")
}

/// `exp(ln_scale) * pPsi_q(x)` with the scale folded into each term.
pub(crate) fn wright_scaled(
    spec: &WrightSpec,
    x: f64,
    ln_scale: f64,
    ctrl: &SeriesControl,
) -> Result<Estimate> {
    spec.validate()?;
    ctrl.validate()?;
    if !x.is_finite() || x.abs() > WRIGHT_MAX_ARG {
        return Err(Error::Range {
            function: "wright",
            x,
            limit: WRIGHT_MAX_ARG,
        });
    }
    let mut rounding = 0.0_f64;
    let sum = sum_series(ctrl, "wright", |n| {
        let nf = n as f64;
        let (mut ln_term, mut sign) = ln_pow(x, n);
        if ln_term == f64::NEG_INFINITY {
            // x = 0 past the first term: still check the Gamma arguments of
            // the surviving term only.
            return Ok(0.0);
        }
        let ln_fact = ln_gamma(nf + 1.0);
        let mut ln_mag = ln_term.abs() + ln_scale.abs() + ln_fact.abs();
        ln_term += ln_scale - ln_fact;
        for &(a, al) in &spec.upper {
            let (g, s) = ln_gamma_signed(a + nf * al)?;
            ln_term += g;
            ln_mag += g.abs();
            sign *= s;
        }
        for &(b, be) in &spec.lower {
            let (g, s) = ln_gamma_signed(b + nf * be)?;
            ln_term -= g;
            ln_mag += g.abs();
            sign *= s;
        }
        let t = signed_exp(ln_term, sign);
        if ln_term.is_finite() {
            rounding += term_rounding(t, ln_mag);
        }
        Ok(t)
    })?;
    Ok(Estimate {
        value: sum.value,
        rounding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctrl() -> SeriesControl {
        SeriesControl::default()
    }

    #[test]
    fn cancelling_pairs_give_exponential() {
        let spec = WrightSpec::new(vec![(1.0, 1.0), (1.0, 1.0)], vec![(1.0, 1.0), (1.0, 1.0)]).unwrap();
        let v = wright(&spec, -1.3, &ctrl()).unwrap();
        assert!((v - (-1.3f64).exp()).abs() < 1e-12);
        for &x in &[-5.0, -0.7, 0.4, 2.5] {
            let spec =
                WrightSpec::new(vec![(0.3, 0.6), (2.0, 0.25)], vec![(0.3, 0.6), (2.0, 0.25)]).unwrap();
            let v = wright(&spec, x, &ctrl()).unwrap();
            assert!((v - x.exp()).abs() < 1e-12 * x.exp().max(1.0), "x = {x}");
        }
    }

    #[test]
    fn zero_argument_keeps_leading_term() {
        let spec = WrightSpec::new(vec![(2.5, 1.0), (0.5, 0.3)], vec![(3.0, 0.9), (1.5, 0.7)]).unwrap();
        let v = wright(&spec, 0.0, &ctrl()).unwrap();
        let oracle = (ln_gamma(2.5) + ln_gamma(0.5) - ln_gamma(3.0) - ln_gamma(1.5)).exp();
        assert!((v - oracle).abs() < 1e-15 * oracle);
    }

    #[test]
    fn fractional_pmf_kernel_against_long_recurrence() {
        // n = 0, k = 0 kernel at alpha = beta = 0.7: sum_j j! (-1.5)^j / Gamma(1 + 0.7 j)^2.
        let spec = WrightSpec::new(vec![(1.0, 1.0), (1.0, 1.0)], vec![(1.0, 0.7), (1.0, 0.7)]).unwrap();
        let v = wright(&spec, -1.5, &ctrl()).unwrap();
        // Oracle: statrs Gamma, pairwise-summed terms, four times the default term cap.
        let mut terms = Vec::new();
        let mut fact = 1.0_f64;
        for j in 0..2000usize {
            if j > 0 {
                fact *= j as f64;
            }
            let g = statrs::function::gamma::gamma(1.0 + 0.7 * j as f64);
            let t = fact * (-1.5f64).powi(j as i32) / (g * g);
            if !t.is_finite() || t == 0.0 {
                break;
            }
            terms.push(t);
        }
        let mut pos: Vec<f64> = terms.iter().copied().filter(|t| *t > 0.0).collect();
        let mut neg: Vec<f64> = terms.iter().copied().filter(|t| *t < 0.0).collect();
        pos.sort_by(|a, b| a.partial_cmp(b).unwrap());
        neg.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let oracle = pos.iter().sum::<f64>() + neg.iter().sum::<f64>();
        // Lanczos Gamma carries ~1e-13 relative error on terms of size ~9.
        assert!((v - oracle).abs() < 5e-12, "{v} vs {oracle}");
        // Same sum at 50 significant digits (mpmath nsum).
        assert!((v - 0.336_885_237_249_406_96).abs() < 1e-14);
    }

    #[test]
    fn divergent_spec_rejected() {
        let err = WrightSpec::new(vec![(1.0, 1.0), (1.0, 1.0)], vec![(1.0, 0.4), (1.0, 0.4)]).unwrap_err();
        assert!(matches!(err, Error::DivergentSeries { .. }));
        assert!(WrightSpec::new(vec![(1.0, 0.0)], vec![]).is_err());
    }

    #[test]
    fn pole_reported() {
        let spec = WrightSpec::new(vec![(-2.0, 1.0)], vec![(1.0, 1.0)]).unwrap();
        assert!(matches!(wright(&spec, 0.5, &ctrl()), Err(Error::Pole { .. })));
        let spec = WrightSpec::new(vec![(1.0, 1.0)], vec![(-1.0, 1.0), (1.0, 1.0)]).unwrap();
        assert!(matches!(wright(&spec, 0.5, &ctrl()), Err(Error::Pole { .. })));
    }

    #[test]
    fn range_guard() {
        let spec = WrightSpec::new(vec![(1.0, 1.0)], vec![(1.0, 1.0)]).unwrap();
        assert!(matches!(wright(&spec, 20.5, &ctrl()), Err(Error::Range { .. })));
    }

    #[test]
    fn cancelling_series_matches_high_precision() {
        // 40-digit mpmath value.
        let spec = WrightSpec::new(vec![(3.0, 1.0), (3.0, 1.0)], vec![(2.4, 0.7), (2.4, 0.7)]).unwrap();
        let est = wright_scaled(&spec, -2.2, 0.0, &ctrl()).unwrap();
        let err = (est.value - 0.060_513_130_926_314_55).abs();
        assert!(err <= est.rounding && est.rounding < 1e-6, "{err} vs {}", est.rounding);
    }

    #[test]
    fn bit_identical_on_repeat() {
        let spec = WrightSpec::new(vec![(3.0, 1.0), (3.0, 1.0)], vec![(2.4, 0.7), (2.4, 0.7)]).unwrap();
        let a = wright(&spec, -2.2, &ctrl()).unwrap();
        let b = wright(&spec, -2.2, &ctrl()).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
