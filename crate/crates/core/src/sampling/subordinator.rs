use rand::distr::Open01;
use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use super::RngStream;
use crate::error::{invalid, Result};

/// Default time step of the discretised subordinator path.
pub const DEFAULT_PATH_STEP: f64 = 1e-3;

/// A stable subordinator observed on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubordinatorPath {
    pub alpha: f64,
    pub time_grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl SubordinatorPath {
    /// First grid time at which the path exceeds `level`, reported at the
    /// midpoint of the crossing step; `None` if it never does.
    pub fn first_passage(&self, level: f64) -> Option<f64> {
        if level < 0.0 {
            return Some(0.0);
        }
        let i = self.values.partition_point(|&h| h <= level);
        if i >= self.values.len() {
            return None;
        }
        if i == 0 {
            return Some(self.time_grid[0]);
        }
        Some(0.5 * (self.time_grid[i - 1] + self.time_grid[i]))
    }
}

fn check_stable_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid("alpha", format!("{alpha} not in (0, 1)")));
    }
    Ok(())
}

fn check_inverse_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(invalid("alpha", format!("{alpha} not in (0, 1]")));
    }
    Ok(())
}

/// `H^alpha(1)`: one-sided stable draw with `E exp(-u H) = exp(-u^alpha)`.
///
/// Kanter's representation: for `U ~ Uniform(0, pi)` and `W ~ Exp(1)`,
/// `H = sin(aU) / sin(U)^(1/a) * (sin((1-a)U) / W)^((1-a)/a)`.
pub fn sample_stable_unit(alpha: f64, rng: &mut RngStream) -> Result<f64> {
    check_stable_alpha(alpha)?;
    Ok(stable_unchecked(alpha, rng))
}

#[inline]
fn stable_unchecked(alpha: f64, rng: &mut RngStream) -> f64 {
    loop {
        let u = std::f64::consts::PI * rng.sample::<f64, _>(Open01);
        let w: f64 = rng.sample(Exp1);
        if w <= 0.0 {
            continue;
        }
        let h = (alpha * u).sin() / u.sin().powf(1.0 / alpha)
            * (((1.0 - alpha) * u).sin() / w).powf((1.0 - alpha) / alpha);
        if h > 0.0 && h.is_finite() {
            return h;
        }
    }
}

/// One draw of `E^alpha(t)`; `alpha = 1` returns `t`.
///
/// Uses self-similarity: `E^alpha(t) = (t / H^alpha(1))^alpha` in law.
pub fn sample_inverse_subordinator(alpha: f64, t: f64, rng: &mut RngStream) -> Result<f64> {
    check_inverse_alpha(alpha)?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(invalid("t", format!("{t} must be finite and nonnegative")));
    }
    if alpha == 1.0 || t == 0.0 {
        return Ok(t);
    }
    let h = stable_unchecked(alpha, rng);
    Ok((t / h).powf(alpha))
}

/// `H^alpha` on the grid `0, step, 2 step, ..` up to `n_steps` steps.
pub fn sample_subordinator_path(
    alpha: f64,
    step: f64,
    n_steps: usize,
    rng: &mut RngStream,
) -> Result<SubordinatorPath> {
    check_stable_alpha(alpha)?;
    check_step(step)?;
    let scale = step.powf(1.0 / alpha);
    let mut time_grid = Vec::with_capacity(n_steps + 1);
    let mut values = Vec::with_capacity(n_steps + 1);
    time_grid.push(0.0);
    values.push(0.0);
    let mut h = 0.0;
    for i in 1..=n_steps {
        h += scale * stable_unchecked(alpha, rng);
        time_grid.push(i as f64 * step);
        values.push(h);
    }
    Ok(SubordinatorPath {
        alpha,
        time_grid,
        values,
    })
}

fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(invalid("step", format!("{step} must be positive")));
    }
    Ok(())
}

/// Joint draw of `E^alpha(t_1), .., E^alpha(t_m)` from one discretised path.
///
/// The subordinator is advanced in steps of `step` until it exceeds each
/// level in turn; the passage time is reported at the midpoint of the
/// crossing step.
pub fn sample_inverse_subordinator_path(
    alpha: f64,
    time_grid: &[f64],
    step: f64,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    check_inverse_alpha(alpha)?;
    check_step(step)?;
    for w in time_grid.windows(2) {
        if !(w[0] < w[1]) {
            return Err(invalid("time_grid", "must be strictly increasing"));
        }
    }
    if let Some(&t0) = time_grid.first() {
        if !(t0 >= 0.0) || !time_grid[time_grid.len() - 1].is_finite() {
            return Err(invalid("time_grid", "must be finite and nonnegative"));
        }
    }
    if alpha == 1.0 {
        return Ok(time_grid.to_vec());
    }
    let scale = step.powf(1.0 / alpha);
    let mut out = Vec::with_capacity(time_grid.len());
    let mut h = 0.0;
    let mut n: u64 = 0;
    for &t in time_grid {
        if t == 0.0 {
            out.push(0.0);
            continue;
        }
        while h <= t {
            h += scale * stable_unchecked(alpha, rng);
            n += 1;
        }
        out.push((n as f64 - 0.5) * step);
    }
    Ok(out)
}
