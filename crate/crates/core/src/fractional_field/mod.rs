//! Time-changed fields: the fractional Poisson field and the three fractional
//! Skellam fields. Each has a sampler built on the inverse stable subordinator,
//! a series pmf, and closed-form moments.

mod moments;
mod pmf;
mod sample;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::skellam_field::SkellamParams;

pub use moments::{
    fprf_moments, fsrf1_moments, fsrf2_moments, fsrf3_moments, inverse_subordinator_cross_moment,
    inverse_subordinator_cross_moment_checked, inverse_subordinator_mean,
    inverse_subordinator_second_moment,
};
pub use pmf::{
    fprf_pmf, fprf_pmf_series, fprf_pmf_table, fsrf1_pgf, fsrf1_pmf, fsrf1_pmf_series,
    fsrf1_pmf_table, fsrf2_pgf, fsrf2_pmf, fsrf2_pmf_series, fsrf2_pmf_table, fsrf3_pmf,
    fsrf3_pmf_series, fsrf3_pmf_table, SeriesEstimate, FSRF3_MAX_ABS_N, PMF_ROUNDING_TOL,
};
pub use sample::{
    fprf_joint_sample, fprf_sample, fsrf1_pgf_pde_residual, fsrf1_sample, fsrf2_sample,
    fsrf3_sample, Fsrf1PgfCheck,
};

/// Fractional orders; `alpha2`/`beta2` are the orders of the second component
/// of the type III field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracOrders {
    pub alpha: f64,
    pub beta: f64,
    pub alpha2: Option<f64>,
    pub beta2: Option<f64>,
}

pub(crate) fn check_order(name: &'static str, v: f64) -> Result<()> {
    if !(v > 0.0 && v <= 1.0) {
        return Err(invalid(name, format!("{v} not in (0, 1]")));
    }
    Ok(())
}

impl FracOrders {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let o = Self {
            alpha,
            beta,
            alpha2: None,
            beta2: None,
        };
        o.validate()?;
        Ok(o)
    }

    pub fn with_second(alpha: f64, beta: f64, alpha2: f64, beta2: f64) -> Result<Self> {
        let o = Self {
            alpha,
            beta,
            alpha2: Some(alpha2),
            beta2: Some(beta2),
        };
        o.validate()?;
        Ok(o)
    }

    pub fn validate(&self) -> Result<()> {
        check_order("alpha", self.alpha)?;
        check_order("beta", self.beta)?;
        if let Some(a) = self.alpha2 {
            check_order("alpha2", a)?;
        }
        if let Some(b) = self.beta2 {
            check_order("beta2", b)?;
        }
        if self.alpha2.is_some() != self.beta2.is_some() {
            return Err(invalid("alpha2", "alpha2 and beta2 must be given together"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FsrfKind {
    /// `S(E_1^alpha(s), E_2^beta(t))`
    I,
    /// `S(E^alpha(s), t)`
    II,
    /// `N_1^{alpha,beta}(s,t) - N_2^{alpha2,beta2}(s,t)`
    III,
}

/// A fractional Skellam field: kind, rates and orders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FsrfModel {
    pub kind: FsrfKind,
    pub params: SkellamParams,
    pub orders: FracOrders,
}

impl FsrfModel {
    pub fn type_one(params: SkellamParams, alpha: f64, beta: f64) -> Result<Self> {
        Self::new(FsrfKind::I, params, FracOrders::new(alpha, beta)?)
    }

    /// Type II time-changes only the first axis; `beta` is fixed at 1.
    pub fn type_two(params: SkellamParams, alpha: f64) -> Result<Self> {
        Self::new(FsrfKind::II, params, FracOrders::new(alpha, 1.0)?)
    }

    pub fn type_three(params: SkellamParams, alpha: f64, beta: f64, alpha2: f64, beta2: f64) -> Result<Self> {
        Self::new(FsrfKind::III, params, FracOrders::with_second(alpha, beta, alpha2, beta2)?)
    }

    pub fn new(kind: FsrfKind, params: SkellamParams, orders: FracOrders) -> Result<Self> {
        let m = Self { kind, params, orders };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.orders.validate()?;
        match self.kind {
            FsrfKind::III if self.orders.alpha2.is_none() => {
                Err(invalid("alpha2", "type III needs alpha2 and beta2"))
            }
            FsrfKind::I | FsrfKind::II if self.orders.alpha2.is_some() => {
                Err(invalid("alpha2", "only type III takes second-component orders"))
            }
            _ => Ok(()),
        }
    }

    pub(crate) fn expect(&self, kind: FsrfKind) -> Result<()> {
        self.validate()?;
        if self.kind != kind {
            return Err(invalid("kind", format!("expected a type {kind:?} model, got {:?}", self.kind)));
        }
        Ok(())
    }

    /// `(alpha2, beta2)` of a validated type III model.
    pub(crate) fn second_orders(&self) -> (f64, f64) {
        (self.orders.alpha2.unwrap_or(1.0), self.orders.beta2.unwrap_or(1.0))
    }
}
