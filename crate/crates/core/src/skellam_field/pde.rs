use serde::{Deserialize, Serialize};

use super::srf::{check_time, pgf_unchecked};
use super::{srf_pmf, SkellamParams};
use crate::error::{invalid, Error, Result};

/// Minimum distance of `u` from the singular point `sqrt(l2 / l1)`.
pub const SINGULAR_THRESHOLD: f64 = 1e-3;

/// Window of `n` over which the pmf-system residual is aggregated.
pub const PDE_PMF_WINDOW: (i64, i64) = (-30, 30);

/// Finite-difference residuals of the two governing equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdeResidual {
    /// `d2G/dt ds - A G - B^2/(l1 u^2 - l2) dG/du` with central differences.
    pub pgf: f64,
    /// l2 norm over [`PDE_PMF_WINDOW`] of both difference-differential residuals.
    pub pmf: f64,
}

/// Residuals of the pgf equation and of the pmf system at step `h`.
///
/// Both stencils are second order, so each residual scales like `h^2`.
pub fn srf_pde_residual(params: &SkellamParams, u: f64, s: f64, t: f64, h: f64) -> Result<PdeResidual> {
    params.validate()?;
    check_time("s", s)?;
    check_time("t", t)?;
    if !(h > 0.0) || !h.is_finite() {
        return Err(invalid("h", format!("{h} must be positive")));
    }
    if !(u > 0.0 && u <= 1.0) || u - h <= 0.0 {
        return Err(Error::Domain { function: "srf_pde_residual", x: u });
    }
    if s < h || t < h {
        return Err(invalid("h", "stencil would leave the positive quadrant"));
    }
    let (l1, l2) = (params.lambda1, params.lambda2);
    let singular = (l2 / l1).sqrt();
    if (u - singular).abs() < SINGULAR_THRESHOLD {
        return Err(Error::Singular { u, threshold: SINGULAR_THRESHOLD });
    }

    let g = |u: f64, s: f64, t: f64| pgf_unchecked(params, u, s * t);
    let mixed = (g(u, s + h, t + h) - g(u, s + h, t - h) - g(u, s - h, t + h) + g(u, s - h, t - h)) / (4.0 * h * h);
    let du = (g(u + h, s, t) - g(u - h, s, t)) / (2.0 * h);
    let a = l1 * (u - 1.0) + l2 * (1.0 / u - 1.0);
    let b = l1 * (u - 1.0) * u + l2 * (1.0 - u);
    let pgf = mixed - a * g(u, s, t) - b * b / (l1 * u * u - l2) * du;

    let mut sq = 0.0;
    for n in PDE_PMF_WINDOW.0..=PDE_PMF_WINDOW.1 {
        let (rs, rt) = srf_pmf_residual_at(params, n, s, t, h)?;
        sq += rs * rs + rt * rt;
    }
    Ok(PdeResidual { pgf, pmf: sq.sqrt() })
}

/// Residuals of the `s`- and `t`-equations of the pmf system at one `n`:
/// `dp/ds = -(l1+l2) t p(n) + l1 t p(n-1) + l2 t p(n+1)` and its `t` analogue.
pub fn srf_pmf_residual_at(params: &SkellamParams, n: i64, s: f64, t: f64, h: f64) -> Result<(f64, f64)> {
    if s < h || t < h || !(h > 0.0) {
        return Err(invalid("h", "stencil would leave the positive quadrant"));
    }
    let (l1, l2) = (params.lambda1, params.lambda2);
    let p = |s: f64, t: f64, n: i64| srf_pmf(params, s, t, n);
    let rhs = |c: f64| -> Result<f64> {
        Ok(c * (-(l1 + l2) * p(s, t, n)? + l1 * p(s, t, n - 1)? + l2 * p(s, t, n + 1)?))
    };
    let ds = (p(s + h, t, n)? - p(s - h, t, n)?) / (2.0 * h);
    let dt = (p(s, t + h, n)? - p(s, t - h, n)?) / (2.0 * h);
    Ok((ds - rhs(t)?, dt - rhs(s)?))
}
