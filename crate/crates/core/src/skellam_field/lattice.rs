use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::GsrfParams;
use super::srf::check_time;
use crate::error::{Error, Result};
use crate::sampling::RngStream;

/// Cell probability `p(k, l, l', jump_index)`.
pub type CellRule = Arc<dyn Fn(u64, u64, u64, usize) -> f64 + Send + Sync>;

/// How the jump probabilities of each lattice cell are assigned.
#[derive(Clone)]
pub enum LatticeRule {
    /// `p = lambda_j / k^2` in every cell.
    Uniform,
    /// Arbitrary cell-dependent rule.
    Custom(CellRule),
}

impl fmt::Debug for LatticeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeRule::Uniform => f.write_str("Uniform"),
            LatticeRule::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Refinement level `k` and cell rule of the Bernoulli-cell approximation.
#[derive(Debug, Clone)]
pub struct LatticeSpec {
    pub k: u64,
    pub rule: LatticeRule,
}

impl LatticeSpec {
    pub fn uniform(k: u64) -> Self {
        Self {
            k,
            rule: LatticeRule::Uniform,
        }
    }
}

fn check_cell(probs: &[f64], l: u64, lp: u64) -> Result<()> {
    let mut total = 0.0;
    for &p in probs {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidLattice(format!("cell ({l}, {lp}): probability {p} not in (0, 1)")));
        }
        total += p;
    }
    if !(total < 1.0) {
        return Err(Error::InvalidLattice(format!("cell ({l}, {lp}): probabilities sum to {total} >= 1")));
    }
    Ok(())
}

/// One draw of `Z_k(s, t) = sum_{l <= [ks]} sum_{l' <= [kt]} X_{l,l'}` where each
/// cell independently takes value `j` with its cell probability and 0 otherwise.
pub fn lattice_sample(spec: &LatticeSpec, params: &GsrfParams, s: f64, t: f64, rng: &mut RngStream) -> Result<f64> {
    params.validate()?;
    check_time("s", s)?;
    check_time("t", t)?;
    if spec.k == 0 {
        return Err(Error::InvalidLattice("k must be at least 1".into()));
    }
    let k = spec.k as f64;
    let rows = (k * s).floor() as u64;
    let cols = (k * t).floor() as u64;
    match &spec.rule {
        LatticeRule::Uniform => {
            let probs: Vec<f64> = params.jumps.iter().map(|&(_, l)| l / (k * k)).collect();
            check_cell(&probs, 1, 1)?;
            // The cells are iid, so the jump counts are multinomial; draw them
            // as a chain of conditional binomials.
            let mut remaining = rows * cols;
            let mut left = 1.0;
            let mut value = 0.0;
            for (&(j, _), &p) in params.jumps.iter().zip(&probs) {
                if remaining == 0 {
                    break;
                }
                let q = (p / left).min(1.0);
                let x = Binomial::new(remaining, q)
                    .map_err(|e| Error::InvalidLattice(e.to_string()))?
                    .sample(rng);
                value += j * x as f64;
                remaining -= x;
                left -= p;
            }
            Ok(value)
        }
        LatticeRule::Custom(rule) => {
            let mut probs = vec![0.0; params.jumps.len()];
            let mut value = 0.0;
            for l in 1..=rows {
                for lp in 1..=cols {
                    for (i, p) in probs.iter_mut().enumerate() {
                        *p = rule(spec.k, l, lp, i);
                    }
                    check_cell(&probs, l, lp)?;
                    let u: f64 = rng.random();
                    let mut acc = 0.0;
                    for (&(j, _), &p) in params.jumps.iter().zip(&probs) {
                        acc += p;
                        if u < acc {
                            value += j;
                            break;
                        }
                    }
                }
            }
            Ok(value)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn skellam() -> GsrfParams {
        GsrfParams::new(vec![(1.0, 2.0), (-1.0, 1.0)]).unwrap()
    }

    #[test]
    fn empty_lattice() {
        let mut r = RngStream::new(0, 0);
        for _ in 0..10 {
            assert_eq!(lattice_sample(&LatticeSpec::uniform(4), &skellam(), 0.2, 1.0, &mut r).unwrap(), 0.0);
        }
    }

    #[test]
    fn coarse_lattice_rejected() {
        let mut r = RngStream::new(0, 0);
        let err = lattice_sample(&LatticeSpec::uniform(1), &skellam(), 1.0, 1.0, &mut r).unwrap_err();
        assert!(matches!(err, Error::InvalidLattice(_)));
        assert!(lattice_sample(&LatticeSpec::uniform(2), &skellam(), 1.0, 1.0, &mut r).is_ok());
        let bad = LatticeSpec {
            k: 8,
            rule: LatticeRule::Custom(Arc::new(|_, l, _, _| if l == 3 { 0.6 } else { 0.01 })),
        };
        assert!(matches!(lattice_sample(&bad, &skellam(), 1.0, 1.0, &mut r), Err(Error::InvalidLattice(_))));
    }

    #[test]
    fn uniform_mean() {
        let mut r = RngStream::new(9, 0);
        let n = 100_000;
        let k = 64.0;
        let xs: Vec<f64> = (0..n)
            .map(|_| lattice_sample(&LatticeSpec::uniform(64), &skellam(), 1.0, 1.0, &mut r).unwrap())
            .collect();
        let m = xs.iter().sum::<f64>() / n as f64;
        let cells = k * k;
        let (p1, p2) = (2.0 / (k * k), 1.0 / (k * k));
        let mean = cells * (p1 - p2);
        let var = cells * (p1 + p2 - (p1 - p2) * (p1 - p2));
        assert!((m - mean).abs() < 4.0 * (var / n as f64).sqrt(), "{m} vs {mean}");
    }

    #[test]
    fn custom_rule_matches_uniform_in_mean() {
        let mut r = RngStream::new(10, 0);
        let rule = LatticeSpec {
            k: 16,
            rule: LatticeRule::Custom(Arc::new(|k, _, _, i| [2.0, 1.0][i] / (k * k) as f64)),
        };
        let n = 20_000;
        let m = (0..n)
            .map(|_| lattice_sample(&rule, &skellam(), 1.0, 1.0, &mut r).unwrap())
            .sum::<f64>()
            / n as f64;
        let cells = 256.0;
        let (p1, p2) = (2.0 / 256.0, 1.0 / 256.0);
        let var = cells * (p1 + p2 - (p1 - p2) * (p1 - p2));
        assert!((m - 1.0).abs() < 4.0 * (var / n as f64).sqrt());
    }
}
