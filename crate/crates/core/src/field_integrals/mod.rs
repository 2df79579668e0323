//! Riemann and Riemann-Liouville integrals of Poisson and generalized Skellam
//! fields over rectangles: exact pathwise evaluation from scatters, moments,
//! analytic characteristic functions and the scaled compound representation.

mod cf;
mod sample;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use cf::{
    compare_cf, gsrf_integral_cf, gsrf_log_cf, levy_integral_cf, levy_integral_cf_checked, prf_integral_cf,
    CfComparisonRow,
};
pub use sample::{
    gsrf_integral_moments, gsrf_integral_of_scatter, gsrf_integral_sample, rl_integral_moments,
    rl_integral_of_scatter, rl_integral_sample, rl_kernel, scaled_compound_sample,
};

/// Orders `(nu1, nu2)` of the Riemann-Liouville integral; `(1, 1)` is the plain
/// Riemann integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralOrders {
    pub nu1: f64,
    pub nu2: f64,
}

impl IntegralOrders {
    pub fn new(nu1: f64, nu2: f64) -> Result<Self> {
        let o = Self { nu1, nu2 };
        o.validate()?;
        Ok(o)
    }

    pub fn riemann() -> Self {
        Self { nu1: 1.0, nu2: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("nu1", self.nu1), ("nu2", self.nu2)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(name, format!("{v} must be positive and finite")));
            }
        }
        Ok(())
    }
}

/// Points `xi` at which characteristic functions are compared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfGrid {
    pub xi_values: Vec<f64>,
}

impl CfGrid {
    pub fn new(xi_values: Vec<f64>) -> Result<Self> {
        let g = Self { xi_values };
        g.validate()?;
        Ok(g)
    }

    /// `{-2, -1.5, ..., 2}`.
    pub fn standard() -> Self {
        Self {
            xi_values: (-4..=4).map(|k| 0.5 * k as f64).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.xi_values.is_empty() {
            return Err(invalid("xi_values", "grid is empty"));
        }
        if let Some(x) = self.xi_values.iter().find(|x| !x.is_finite()) {
            return Err(invalid("xi_values", format!("{x} is not finite")));
        }
        if !self.xi_values.contains(&0.0) {
            return Err(invalid("xi_values", "grid must contain 0"));
        }
        Ok(())
    }
}
