use num_complex::Complex64;

use super::{ComparisonReport, Metric};
use crate::error::{invalid, Error, Result};
use crate::field_integrals::CfGrid;
use crate::skellam_field::PmfTable;

/// Two-sided z threshold used by every moment gate.
pub const Z_GATE: f64 = 4.0;

/// Relative frequencies on `[n_min, n_max]`; out-of-window draws go to the tail.
pub fn empirical_pmf(samples: &[i64], n_min: i64, n_max: i64) -> Result<PmfTable> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    if n_min > n_max {
        return Err(invalid("n_min", "must not exceed n_max"));
    }
    let mut counts = vec![0u64; (n_max - n_min + 1) as usize];
    let mut outside = 0u64;
    for &x in samples {
        if (n_min..=n_max).contains(&x) {
            counts[(x - n_min) as usize] += 1;
        } else {
            outside += 1;
        }
    }
    let total = samples.len() as f64;
    let table = PmfTable {
        n_min,
        n_max,
        probs: counts.iter().map(|&c| c as f64 / total).collect(),
        tail_mass: outside as f64 / total,
    };
    table.validate()?;
    Ok(table)
}

/// `(sum |p_n - q_n| + |tail_p - tail_q|) / 2` on a shared window.
pub fn tv_distance(p: &PmfTable, q: &PmfTable) -> Result<f64> {
    if p.n_min != q.n_min || p.n_max != q.n_max {
        return Err(Error::WindowMismatch(p.n_min, p.n_max, q.n_min, q.n_max));
    }
    let body: f64 = p.probs.iter().zip(&q.probs).map(|(a, b)| (a - b).abs()).sum();
    Ok(0.5 * (body + (p.tail_mass - q.tail_mass).abs()))
}

/// `(1/N) sum e^{i xi x}` at each grid point.
pub fn empirical_cf(samples: &[f64], grid: &CfGrid) -> Result<Vec<Complex64>> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    grid.validate()?;
    let n = samples.len() as f64;
    Ok(grid
        .xi_values
        .iter()
        .map(|&xi| {
            if xi == 0.0 {
                return Complex64::new(1.0, 0.0);
            }
            let (re, im) = samples
                .iter()
                .fold((0.0, 0.0), |(re, im), &x| (re + (xi * x).cos(), im + (xi * x).sin()));
            Complex64::new(re / n, im / n)
        })
        .collect())
}

/// `max |a_k - b_k|` over paired grid values.
pub fn sup_cf_distance(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(invalid("cf values", "lengths differ"));
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Gate on the sample mean: `z = |mean - analytic_mean| / sqrt(analytic_var / N)`.
pub fn moment_z_check(name: &str, samples: &[f64], analytic_mean: f64, analytic_var: f64) -> Result<ComparisonReport> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    if !(analytic_var > 0.0) {
        return Err(invalid("analytic_var", format!("{analytic_var} must be positive")));
    }
    let m = mean(samples);
    let z = (m - analytic_mean).abs() / (analytic_var / samples.len() as f64).sqrt();
    Ok(ComparisonReport::new(name, Metric::MomentZ, z, Z_GATE)
        .with("sample_mean", m)
        .with("analytic_mean", analytic_mean))
}

/// Gate on the sample variance, with the standard error estimated from the
/// sample fourth central moment.
pub fn variance_z_check(name: &str, samples: &[f64], analytic_var: f64) -> Result<ComparisonReport> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::EmptySample);
    }
    let m = mean(samples);
    let nf = n as f64;
    let m2 = samples.iter().map(|x| (x - m).powi(2)).sum::<f64>() / nf;
    let m4 = samples.iter().map(|x| (x - m).powi(4)).sum::<f64>() / nf;
    let var = m2 * nf / (nf - 1.0);
    let se = ((m4 - m2 * m2) / nf).sqrt();
    let z = if se > 0.0 { (var - analytic_var).abs() / se } else if var == analytic_var { 0.0 } else { f64::INFINITY };
    Ok(ComparisonReport::new(name, Metric::MomentZ, z, Z_GATE)
        .with("sample_var", var)
        .with("analytic_var", analytic_var))
}

/// Gate on the sample covariance, with the standard error of the mean of
/// centred products.
pub fn covariance_z_check(name: &str, xs: &[f64], ys: &[f64], analytic_cov: f64) -> Result<ComparisonReport> {
    if xs.len() != ys.len() {
        return Err(invalid("samples", "paired samples differ in length"));
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::EmptySample);
    }
    let (mx, my) = (mean(xs), mean(ys));
    let prods: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).collect();
    let nf = n as f64;
    let cov = prods.iter().sum::<f64>() / (nf - 1.0);
    let mp = mean(&prods);
    let se = (prods.iter().map(|p| (p - mp).powi(2)).sum::<f64>() / (nf - 1.0) / nf).sqrt();
    let z = if se > 0.0 { (cov - analytic_cov).abs() / se } else if cov == analytic_cov { 0.0 } else { f64::INFINITY };
    Ok(ComparisonReport::new(name, Metric::MomentZ, z, Z_GATE)
        .with("sample_cov", cov)
        .with("analytic_cov", analytic_cov))
}
