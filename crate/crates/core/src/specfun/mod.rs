//! Special functions behind every analytic formula in the crate: log-gamma,
//! the modified Bessel function `I_n`, two- and three-parameter Mittag-Leffler
//! functions and the generalized Wright function `pPsi_q`.
//!
//! All series are summed term by term in log-magnitude form (one
//! exponentiation per term) with Neumaier compensation, and stop after
//! [`SeriesControl::consecutive_small`] successive terms fall below
//! `rel_tol * |partial sum|`.

mod bessel;
mod gamma;
mod mittag_leffler;
mod wright;

pub use bessel::{bessel_i, bessel_i_with, BESSEL_MAX_ARG};
pub use gamma::log_gamma;
pub use mittag_leffler::{mittag_leffler2, mittag_leffler3, mittag_leffler3_with, ML_MAX_ARG};
pub use wright::{wright, WrightSpec, WRIGHT_MAX_ARG};

pub(crate) use gamma::{ln_gamma, ln_gamma_signed};
pub(crate) use mittag_leffler::mittag_leffler3_scaled;
pub(crate) use wright::wright_scaled;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Truncation control shared by every series evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
    pub consecutive_small: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-15,
            max_terms: 500,
            consecutive_small: 3,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize, consecutive_small: usize) -> Result<Self> {
        let ctrl = Self {
            rel_tol,
            max_terms,
            consecutive_small,
        };
        ctrl.validate()?;
        Ok(ctrl)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(invalid("rel_tol", "must be a positive finite number"));
        }
        if self.max_terms == 0 {
            return Err(invalid("max_terms", "must be at least 1"));
        }
        if self.consecutive_small == 0 {
            return Err(invalid("consecutive_small", "must be at least 1"));
        }
        Ok(())
    }
}

/// Outcome of a truncated series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SeriesSum {
    pub value: f64,
    pub terms: usize,
    pub max_abs_term: f64,
    pub last_abs_term: f64,
    /// `sum |term|`, the scale of the rounding error.
    pub abs_sum: f64,
}

/// A series value with an estimate of its accumulated rounding error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Estimate {
    pub value: f64,
    pub rounding: f64,
}

/// Relative rounding error tolerated by the public evaluators. The bound is
/// conservative; observed errors sit about an order of magnitude below it.
pub const PRECISION_TOL: f64 = 1e-4;

/// Rounding bound for a sum whose terms were each formed as `exp(l)` with
/// `|l| <= max_abs_ln`: every term carries a relative error of roughly
/// `(few + |l|) * eps`.
pub(crate) fn rounding_bound(abs_sum: f64, max_abs_ln: f64) -> f64 {
    abs_sum * f64::EPSILON * (8.0 + max_abs_ln)
}

/// Rounding contribution of one term `sign * exp(l)` where the pieces summed
/// into `l` have total magnitude `ln_mag`.
pub(crate) fn term_rounding(term: f64, ln_mag: f64) -> f64 {
    term.abs() * f64::EPSILON * (8.0 + ln_mag)
}

impl Estimate {
    /// The value, or [`Error::PrecisionLoss`] when the rounding estimate
    /// exceeds [`PRECISION_TOL`] relative to it.
    pub(crate) fn checked(self, function: &'static str) -> Result<f64> {
        if self.rounding > PRECISION_TOL * self.value.abs() {
            return Err(Error::PrecisionLoss {
                function,
                bound: self.rounding,
            });
        }
        Ok(self.value)
    }
}

/// Sums `term(0) + term(1) + ...` under the stopping rule of `ctrl`.
pub(crate) fn sum_series<F>(
    ctrl: &SeriesControl,
    function: &'static str,
    mut term: F,
) -> Result<SeriesSum>
where
    F: FnMut(usize) -> Result<f64>,
{
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    let mut small = 0;
    let mut max_abs_term = 0.0_f64;
    let mut abs_sum = 0.0_f64;
    for r in 0..ctrl.max_terms {
        let t = term(r)?;
        if !t.is_finite() {
            return Err(Error::NonConvergence {
                function,
                terms: r + 1,
            });
        }
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
        max_abs_term = max_abs_term.max(t.abs());
        abs_sum += t.abs();
        let total = sum + comp;
        if t == 0.0 || t.abs() < ctrl.rel_tol * total.abs() {
            small += 1;
            if small >= ctrl.consecutive_small {
                return Ok(SeriesSum {
                    value: total,
                    terms: r + 1,
                    max_abs_term,
                    last_abs_term: t.abs(),
                    abs_sum,
                });
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence {
        function,
        terms: ctrl.max_terms,
    })
}

/// `sign * exp(ln_mag)`, with `ln_mag = -inf` mapping to zero.
#[inline]
pub(crate) fn signed_exp(ln_mag: f64, sign: f64) -> f64 {
    if ln_mag == f64::NEG_INFINITY {
        0.0
    } else {
        sign * ln_mag.exp()
    }
}

/// `ln|x|^r` and the sign of `x^r`, with `0^0 = 1`.
#[inline]
pub(crate) fn ln_pow(x: f64, r: usize) -> (f64, f64) {
    if r == 0 {
        return (0.0, 1.0);
    }
    if x == 0.0 {
        return (f64::NEG_INFINITY, 1.0);
    }
    let sign = if x < 0.0 && r % 2 == 1 { -1.0 } else { 1.0 };
    (r as f64 * x.abs().ln(), sign)
}
