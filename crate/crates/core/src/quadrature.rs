//! Gauss rules on fixed intervals and the singular-kernel integral behind the
//! fractional covariances.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::{GaussJacobi, GaussLegendre};

use crate::error::{invalid, Error, Result};
use crate::specfun::ln_gamma;

/// Relative change allowed between the 64- and 128-node rules.
pub const DOUBLING_TOL: f64 = 1e-9;

fn legendre_pairs(n: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("nonzero degree"));
    rule.as_node_weight_pairs().to_vec()
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` for `n` in {64, 128}.
pub(crate) fn legendre(n: usize) -> &'static [(f64, f64)] {
    static GL64: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    static GL128: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    match n {
        64 => GL64.get_or_init(|| legendre_pairs(64)),
        128 => GL128.get_or_init(|| legendre_pairs(128)),
        _ => panic!("unsupported Gauss-Legendre degree {n}"),
    }
}

/// Tensor Gauss-Legendre rule for `int_0^1 int_0^1 f(x, y) dx dy`.
pub(crate) fn unit_square<T, F>(n: usize, mut f: F) -> T
where
    T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
    F: FnMut(f64, f64) -> T,
{
    let rule = legendre(n);
    let mut acc = T::default();
    for &(xi, wi) in rule {
        let x = 0.5 * (xi + 1.0);
        for &(yj, wj) in rule {
            let y = 0.5 * (yj + 1.0);
            acc = acc + f(x, y) * (0.25 * wi * wj);
        }
    }
    acc
}

fn jacobi(n: usize, a: f64, b: f64) -> Result<GaussJacobi> {
    let a = a.try_into().map_err(|_| invalid("alpha", "Jacobi exponent must exceed -1"))?;
    let b = b.try_into().map_err(|_| invalid("alpha", "Jacobi exponent must exceed -1"))?;
    Ok(GaussJacobi::new(NonZeroUsize::new(n).expect("nonzero degree"), a, b))
}

/// `int_0^r (1-z)^a z^(a-1) dz` for `0 <= r <= 1` with an `n`-node Jacobi rule.
fn incomplete_kernel(a: f64, r: f64, n: usize) -> Result<f64> {
    if r <= 0.5 {
        // z = r (1 + xi) / 2; the z^(a-1) factor becomes the (1 + xi) weight.
        let rule = jacobi(n, 0.0, a - 1.0)?;
        let s: f64 = rule
            .as_node_weight_pairs()
            .iter()
            .map(|&(xi, w)| w * (1.0 - 0.5 * r * (1.0 + xi)).powf(a))
            .sum();
        Ok((0.5 * r).powf(a) * s)
    } else {
        // Complement on [r, 1]; z = r + (1 - r)(1 + xi)/2 and the (1-z)^a factor
        // becomes the (1 - xi) weight.
        let ln_beta = ln_gamma(a) + ln_gamma(a + 1.0) - ln_gamma(2.0 * a + 1.0);
        if r >= 1.0 {
            return Ok(ln_beta.exp());
        }
        let rule = jacobi(n, a, 0.0)?;
        let s: f64 = rule
            .as_node_weight_pairs()
            .iter()
            .map(|&(xi, w)| w * (r + 0.5 * (1.0 - r) * (1.0 + xi)).powf(a - 1.0))
            .sum();
        Ok(ln_beta.exp() - (0.5 * (1.0 - r)).powf(a + 1.0) * s)
    }
}

/// `int_0^m (c - x)^a x^(a-1) dx` for `0 <= m <= c`, with the relative change
/// between 64- and 128-node rules.
pub fn singular_kernel_integral_checked(a: f64, c: f64, m: f64) -> Result<(f64, f64)> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(invalid("alpha", format!("{a} must be positive")));
    }
    if !(m >= 0.0 && m <= c) || !c.is_finite() {
        return Err(invalid("m", format!("need 0 <= m <= c, got m = {m}, c = {c}")));
    }
    if m == 0.0 {
        return Ok((0.0, 0.0));
    }
    let r = (m / c).min(1.0);
    let scale = c.powf(2.0 * a);
    let v64 = scale * incomplete_kernel(a, r, 64)?;
    let v128 = scale * incomplete_kernel(a, r, 128)?;
    let rel = if v128 == 0.0 {
        (v64 - v128).abs()
    } else {
        ((v64 - v128) / v128).abs()
    };
    Ok((v128, rel))
}

/// As [`singular_kernel_integral_checked`], failing when the node-doubling
/// change exceeds [`DOUBLING_TOL`].
pub fn singular_kernel_integral(a: f64, c: f64, m: f64) -> Result<f64> {
    let (v, rel) = singular_kernel_integral_checked(a, c, m)?;
    if rel > DOUBLING_TOL {
        return Err(Error::Quadrature { rel_change: rel });
    }
    Ok(v)
}
