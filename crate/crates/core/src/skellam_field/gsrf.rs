use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::sampling::{count_at, sample_point_field, sample_poisson, BoxRegion, PointProcessSample, RngStream};

/// Jump sizes and rates `{(j, lambda_j)}` of a generalized Skellam field
/// `sum_j j N_j(B)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GsrfParams {
    pub jumps: Vec<(f64, f64)>,
}

impl GsrfParams {
    pub fn new(jumps: Vec<(f64, f64)>) -> Result<Self> {
        let p = Self { jumps };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.jumps.is_empty() {
            return Err(invalid("jumps", "at least one jump is required"));
        }
        for (i, &(j, l)) in self.jumps.iter().enumerate() {
            if j == 0.0 || !j.is_finite() {
                return Err(invalid("jumps", format!("jump size {j} must be nonzero and finite")));
            }
            if !(l > 0.0) || !l.is_finite() {
                return Err(invalid("jumps", format!("rate {l} of jump {j} must be positive")));
            }
            if self.jumps[..i].iter().any(|&(k, _)| k == j) {
                return Err(invalid("jumps", format!("jump size {j} listed twice")));
            }
        }
        Ok(())
    }

    /// `sum_j lambda_j`, the rate of the underlying compound Poisson field.
    pub fn total_rate(&self) -> f64 {
        self.jumps.iter().map(|j| j.1).sum()
    }

    /// `sum_j j lambda_j`
    pub fn first_moment_rate(&self) -> f64 {
        self.jumps.iter().map(|&(j, l)| j * l).sum()
    }

    /// `sum_j j^2 lambda_j`
    pub fn second_moment_rate(&self) -> f64 {
        self.jumps.iter().map(|&(j, l)| j * j * l).sum()
    }

    /// Draws one jump size with `Pr{Y = j} = lambda_j / sum lambda`.
    pub fn sample_jump(&self, rng: &mut RngStream) -> f64 {
        let target = rng.random::<f64>() * self.total_rate();
        let mut acc = 0.0;
        for &(j, l) in &self.jumps {
            acc += l;
            if target < acc {
                return j;
            }
        }
        self.jumps[self.jumps.len() - 1].0
    }
}

/// `sum_j j N_j(B)` with independent Poisson counts.
pub fn gsrf_count(params: &GsrfParams, region: &BoxRegion, rng: &mut RngStream) -> Result<f64> {
    params.validate()?;
    let m = region.measure();
    let mut v = 0.0;
    for &(j, l) in &params.jumps {
        v += j * sample_poisson(l * m, rng)? as f64;
    }
    Ok(v)
}

/// Compound form `sum_{k <= N(B)} Y_k`, `N(B) ~ Poisson(sum lambda_j |B|)`.
pub fn gsrf_compound_sample(params: &GsrfParams, region: &BoxRegion, rng: &mut RngStream) -> Result<f64> {
    params.validate()?;
    let n = sample_poisson(params.total_rate() * region.measure(), rng)?;
    Ok((0..n).map(|_| params.sample_jump(rng)).sum())
}

/// `(E S(B1), Var S(B1), Cov(S(B1), S(B2)))`.
pub fn gsrf_moments(params: &GsrfParams, b1: &BoxRegion, b2: &BoxRegion) -> Result<(f64, f64, f64)> {
    params.validate()?;
    let m1 = b1.measure();
    let second = params.second_moment_rate();
    Ok((
        params.first_moment_rate() * m1,
        second * m1,
        second * b1.intersection_measure(b2),
    ))
}

/// Sum of two independent fields: rates add on shared jump sizes.
pub fn gsrf_superpose(p1: &GsrfParams, p2: &GsrfParams) -> Result<GsrfParams> {
    p1.validate()?;
    p2.validate()?;
    let mut jumps = p1.jumps.clone();
    for &(j, l) in &p2.jumps {
        match jumps.iter_mut().find(|(k, _)| *k == j) {
            Some(e) => e.1 += l,
            None => jumps.push((j, l)),
        }
    }
    GsrfParams::new(jumps)
}

/// One scatter per component on `[0, s_max] x [0, t_max]`, giving the field at
/// every `(s, t)` in that rectangle with the exact joint law.
#[derive(Debug, Clone)]
pub struct PlanarGsrfSample {
    pub components: Vec<(f64, PointProcessSample)>,
}

impl PlanarGsrfSample {
    /// `S(s, t)`, the field on `[0, s] x [0, t]`.
    pub fn value_at(&self, s: f64, t: f64) -> f64 {
        let corner = [s, t];
        self.components
            .iter()
            .map(|(j, sample)| j * count_at(sample, &corner).expect("planar sample") as f64)
            .sum()
    }

    /// Rectangular increment over `(s, s'] x (t, t']`.
    pub fn increment(&self, s: f64, t: f64, s2: f64, t2: f64) -> f64 {
        self.value_at(s2, t2) - self.value_at(s, t2) - self.value_at(s2, t) + self.value_at(s, t)
    }
}

pub fn sample_planar_gsrf(params: &GsrfParams, s_max: f64, t_max: f64, rng: &mut RngStream) -> Result<PlanarGsrfSample> {
    params.validate()?;
    let region = BoxRegion::rectangle(s_max, t_max)?;
    let components = params
        .jumps
        .iter()
        .map(|&(j, l)| Ok((j, sample_point_field(l, &region, rng)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PlanarGsrfSample { components })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn skellam() -> GsrfParams {
        GsrfParams::new(vec![(1.0, 2.0), (-1.0, 1.0)]).unwrap()
    }

    fn mean_var(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        (m, xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0))
    }

    #[test]
    fn validation() {
        assert!(GsrfParams::new(vec![]).is_err());
        assert!(GsrfParams::new(vec![(0.0, 1.0)]).is_err());
        assert!(GsrfParams::new(vec![(1.0, 0.0)]).is_err());
        assert!(GsrfParams::new(vec![(1.0, 1.0), (1.0, 2.0)]).is_err());
    }

    #[test]
    fn zero_measure_gives_zero() {
        let mut r = RngStream::new(0, 0);
        let b = BoxRegion::new(vec![0.0, 0.0], vec![0.0, 1.0]).unwrap();
        for _ in 0..20 {
            assert_eq!(gsrf_count(&skellam(), &b, &mut r).unwrap(), 0.0);
            assert_eq!(gsrf_compound_sample(&skellam(), &b, &mut r).unwrap(), 0.0);
        }
    }

    #[test]
    fn count_moments() {
        let mut r = RngStream::new(2, 0);
        let n = 100_000;
        let b = BoxRegion::unit_square();
        let xs: Vec<f64> = (0..n).map(|_| gsrf_count(&skellam(), &b, &mut r).unwrap()).collect();
        let (m, _) = mean_var(&xs);
        assert!((m - 1.0).abs() < 4.0 * (3.0 / n as f64).sqrt());
        let two = GsrfParams::new(vec![(2.0, 1.0)]).unwrap();
        let xs: Vec<f64> = (0..n).map(|_| gsrf_count(&two, &b, &mut r).unwrap()).collect();
        let (_, v) = mean_var(&xs);
        // Var of the sample variance of 2 Poisson(1): (mu4 - sigma^4)/n with mu4 = 16 * 4, sigma^4 = 16.
        assert!((v - 4.0).abs() < 4.0 * ((64.0 - 16.0) / n as f64).sqrt());
    }

    #[test]
    fn closed_form_moments() {
        let b1 = BoxRegion::unit_square();
        let b2 = BoxRegion::new(vec![0.5, 0.0], vec![1.5, 1.0]).unwrap();
        let (m, v, c) = gsrf_moments(&skellam(), &b1, &b2).unwrap();
        assert_eq!((m, v), (1.0, 3.0));
        assert!((c - 1.5).abs() < 1e-15);
        let (_, v, c) = gsrf_moments(&skellam(), &b1, &b1).unwrap();
        assert_eq!(v, c);
        let far = BoxRegion::new(vec![2.0, 2.0], vec![3.0, 3.0]).unwrap();
        assert_eq!(gsrf_moments(&skellam(), &b1, &far).unwrap().2, 0.0);
    }

    #[test]
    fn superposition() {
        let one = GsrfParams::new(vec![(1.0, 1.0)]).unwrap();
        assert_eq!(gsrf_superpose(&one, &one).unwrap().jumps, vec![(1.0, 2.0)]);
        let other = GsrfParams::new(vec![(-3.0, 0.5)]).unwrap();
        assert_eq!(gsrf_superpose(&one, &other).unwrap().jumps, vec![(1.0, 1.0), (-3.0, 0.5)]);
        // moments add
        let p = gsrf_superpose(&skellam(), &other).unwrap();
        let b = BoxRegion::unit_square();
        let (m, v, _) = gsrf_moments(&p, &b, &b).unwrap();
        let (m1, v1, _) = gsrf_moments(&skellam(), &b, &b).unwrap();
        let (m2, v2, _) = gsrf_moments(&other, &b, &b).unwrap();
        assert!((m - (m1 + m2)).abs() < 1e-15 && (v - (v1 + v2)).abs() < 1e-15);
    }

    #[test]
    fn compound_mgf() {
        let mut r = RngStream::new(6, 0);
        let b = BoxRegion::unit_square();
        let u = 0.3;
        let n = 100_000;
        let xs: Vec<f64> = (0..n)
            .map(|_| (u * gsrf_compound_sample(&skellam(), &b, &mut r).unwrap()).exp())
            .collect();
        let (m, v) = mean_var(&xs);
        let target = (2.0 * (u.exp() - 1.0) + ((-u).exp() - 1.0)).exp();
        assert!((m - target).abs() < 4.0 * (v / n as f64).sqrt());
    }

    #[test]
    fn planar_increments_uncorrelated() {
        let mut r = RngStream::new(13, 0);
        let n = 50_000;
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        for _ in 0..n {
            let f = sample_planar_gsrf(&skellam(), 2.0, 2.0, &mut r).unwrap();
            a.push(f.increment(0.0, 0.0, 1.0, 1.0));
            b.push(f.increment(1.0, 0.5, 2.0, 1.5));
            assert_eq!(f.value_at(0.0, 0.0), 0.0);
        }
        let (ma, va) = mean_var(&a);
        let (mb, vb) = mean_var(&b);
        let cov = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / (n as f64 - 1.0);
        assert!(cov.abs() < 4.0 * (va * vb / n as f64).sqrt());
    }
}
