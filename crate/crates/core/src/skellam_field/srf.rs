use serde::{Deserialize, Serialize};

use super::{GsrfParams, PmfTable};
use crate::error::{invalid, Result};
use crate::specfun::{bessel_i_with, SeriesControl};

/// Rates of the two Poisson fields whose difference is the Skellam field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkellamParams {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl SkellamParams {
    pub fn new(lambda1: f64, lambda2: f64) -> Result<Self> {
        let p = Self { lambda1, lambda2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda1 > 0.0) || !self.lambda1.is_finite() {
            return Err(invalid("lambda1", format!("{} must be positive", self.lambda1)));
        }
        if !(self.lambda2 > 0.0) || !self.lambda2.is_finite() {
            return Err(invalid("lambda2", format!("{} must be positive", self.lambda2)));
        }
        Ok(())
    }

    /// The same field as a GSRF with jumps `+1` and `-1`.
    pub fn to_gsrf(&self) -> GsrfParams {
        GsrfParams {
            jumps: vec![(1.0, self.lambda1), (-1.0, self.lambda2)],
        }
    }

    pub fn swapped(&self) -> Self {
        Self {
            lambda1: self.lambda2,
            lambda2: self.lambda1,
        }
    }
}

/// A point `(s, t)` of the positive quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub s: f64,
    pub t: f64,
}

impl GridPoint {
    pub fn new(s: f64, t: f64) -> Result<Self> {
        check_time("s", s)?;
        check_time("t", t)?;
        Ok(Self { s, t })
    }

    /// Coordinatewise minimum, the corner of the rectangle intersection.
    pub fn meet(&self, other: &GridPoint) -> GridPoint {
        GridPoint {
            s: self.s.min(other.s),
            t: self.t.min(other.t),
        }
    }

    /// Partial order `(s, t) <= (s', t')`.
    pub fn precedes(&self, other: &GridPoint) -> bool {
        self.s <= other.s && self.t <= other.t
    }
}

pub(crate) fn check_time(name: &'static str, v: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(invalid(name, format!("{v} must be finite and nonnegative")));
    }
    Ok(())
}

/// `Pr{S(s,t) = n} = exp(-(l1+l2)st) (l1/l2)^(n/2) I_|n|(2 sqrt(l1 l2) st)`.
pub fn srf_pmf(params: &SkellamParams, s: f64, t: f64, n: i64) -> Result<f64> {
    srf_pmf_with(params, s, t, n, &SeriesControl::default())
}

pub fn srf_pmf_with(params: &SkellamParams, s: f64, t: f64, n: i64, ctrl: &SeriesControl) -> Result<f64> {
    params.validate()?;
    check_time("s", s)?;
    check_time("t", t)?;
    let area = s * t;
    if area == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let order = i32::try_from(n).map_err(|_| invalid("n", "out of range"))?;
    let (l1, l2) = (params.lambda1, params.lambda2);
    let bessel = bessel_i_with(order, 2.0 * (l1 * l2).sqrt() * area, ctrl)?;
    let ln_pref = -(l1 + l2) * area + 0.5 * n as f64 * (l1 / l2).ln();
    Ok(ln_pref.exp() * bessel)
}

/// [`srf_pmf`] over `n_min..=n_max` with the truncated tail.
pub fn srf_pmf_table(params: &SkellamParams, s: f64, t: f64, n_min: i64, n_max: i64) -> Result<PmfTable> {
    if n_min > n_max {
        return Err(invalid("n_min", "must not exceed n_max"));
    }
    let probs = (n_min..=n_max)
        .map(|n| srf_pmf(params, s, t, n))
        .collect::<Result<Vec<_>>>()?;
    PmfTable::from_probs(n_min, probs)
}

/// `G(u,s,t) = exp(l1 st (u-1) + l2 st (1/u - 1))`.
pub fn srf_pgf(params: &SkellamParams, u: f64, s: f64, t: f64) -> Result<f64> {
    params.validate()?;
    check_time("s", s)?;
    check_time("t", t)?;
    if !(u > 0.0 && u <= 1.0) {
        return Err(crate::error::Error::Domain { function: "srf_pgf", x: u });
    }
    Ok(pgf_unchecked(params, u, s * t))
}

#[inline]
pub(crate) fn pgf_unchecked(params: &SkellamParams, u: f64, area: f64) -> f64 {
    (area * (params.lambda1 * (u - 1.0) + params.lambda2 * (1.0 / u - 1.0))).exp()
}

/// `(mean, variance)` of `S(s,t)`.
pub fn srf_moments(params: &SkellamParams, s: f64, t: f64) -> (f64, f64) {
    let area = s * t;
    ((params.lambda1 - params.lambda2) * area, (params.lambda1 + params.lambda2) * area)
}

/// Normalised deviations of the exact small-rectangle probabilities from their
/// first-order expansions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfinitesimalReport {
    pub area: f64,
    /// `|Pr{S = 1} - l1 |B|| / |B|`
    pub plus_one: f64,
    /// `|Pr{S = -1} - l2 |B|| / |B|`
    pub minus_one: f64,
    /// `|Pr{S = 0} - (1 - (l1 + l2)|B|)| / |B|`
    pub zero: f64,
    /// `Pr{|S| >= 2} / |B|`
    pub big_jump: f64,
}

/// Evaluates the first-order behaviour of the pmf on a rectangle of the given area.
pub fn srf_infinitesimal_check(params: &SkellamParams, area: f64) -> Result<InfinitesimalReport> {
    if !(area > 0.0) || !area.is_finite() {
        return Err(invalid("area", format!("{area} must be positive")));
    }
    let p = |n| srf_pmf(params, area, 1.0, n);
    let (p0, p1, m1) = (p(0)?, p(1)?, p(-1)?);
    // Pr{|S| >= 2} summed directly, not as 1 - p0 - p1 - m1, to avoid cancellation.
    let mut big = 0.0;
    for k in 2..=40 {
        big += p(k)? + p(-k)?;
    }
    Ok(InfinitesimalReport {
        area,
        plus_one: (p1 - params.lambda1 * area).abs() / area,
        minus_one: (m1 - params.lambda2 * area).abs() / area,
        zero: (p0 - (1.0 - (params.lambda1 + params.lambda2) * area)).abs() / area,
        big_jump: big / area,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poisson_pmf(mu: f64, k: i64) -> f64 {
        if k < 0 {
            return 0.0;
        }
        let ln = -mu + k as f64 * mu.ln() - crate::specfun::log_gamma(k as f64 + 1.0).unwrap();
        ln.exp()
    }

    fn convolution_oracle(l1: f64, l2: f64, n: i64) -> f64 {
        (0..200).map(|k| poisson_pmf(l1, n + k) * poisson_pmf(l2, k)).sum()
    }

    #[test]
    fn matches_poisson_convolution() {
        let p = SkellamParams::new(2.0, 1.0).unwrap();
        for n in -20..=20 {
            let v = srf_pmf(&p, 1.0, 1.0, n).unwrap();
            let o = convolution_oracle(2.0, 1.0, n);
            assert!((v - o).abs() < 1e-12, "n {n}: {v} vs {o}");
        }
    }

    #[test]
    fn empty_rectangle() {
        let p = SkellamParams::new(2.0, 1.0).unwrap();
        assert_eq!(srf_pmf(&p, 0.0, 1.0, 0).unwrap(), 1.0);
        assert_eq!(srf_pmf(&p, 0.0, 1.0, 3).unwrap(), 0.0);
        let t = srf_pmf_table(&p, 0.0, 1.0, -3, 3).unwrap();
        assert_eq!(t.prob(0), 1.0);
        assert_eq!(t.tail_mass, 0.0);
    }

    #[test]
    fn symmetry_and_swap() {
        let p = SkellamParams::new(1.3, 1.3).unwrap();
        for n in 0..10 {
            assert_eq!(srf_pmf(&p, 0.8, 1.1, n).unwrap(), srf_pmf(&p, 0.8, 1.1, -n).unwrap());
        }
        let q = SkellamParams::new(2.5, 0.5).unwrap();
        for n in -10..=10 {
            let a = srf_pmf(&q, 1.0, 1.2, n).unwrap();
            let b = srf_pmf(&q.swapped(), 1.0, 1.2, -n).unwrap();
            assert!((a - b).abs() <= 1e-16 * a.max(1e-300) * 4.0, "{a} {b}");
        }
    }

    #[test]
    fn mode_moves_under_swap() {
        let q = SkellamParams::new(3.0, 0.5).unwrap();
        let t = srf_pmf_table(&q, 1.0, 1.0, -15, 15).unwrap();
        let ts = srf_pmf_table(&q.swapped(), 1.0, 1.0, -15, 15).unwrap();
        let mode = |t: &PmfTable| t.iter().max_by(|a, b| a.1.partial_cmp(&b.1).unwrap()).unwrap().0;
        assert!(mode(&t) > 0 && mode(&ts) < 0);
    }

    #[test]
    fn normalisation() {
        for &(l1, l2, s, t) in &[(1.0, 1.0, 1.0, 1.0), (2.0, 1.0, 1.0, 2.0), (3.0, 0.5, 1.4, 1.4), (0.2, 3.0, 2.0, 1.0)] {
            let p = SkellamParams::new(l1, l2).unwrap();
            let tab = srf_pmf_table(&p, s, t, -30, 30).unwrap();
            assert!(tab.iter().all(|(_, v)| v >= 0.0));
            assert!((tab.window_mass() - 1.0).abs() < 1e-10);
        }
        let tab = srf_pmf_table(&SkellamParams::new(1.0, 1.0).unwrap(), 1.0, 1.0, -30, 30).unwrap();
        assert!(tab.tail_mass < 1e-10);
    }

    #[test]
    fn pgf_values() {
        let p = SkellamParams::new(2.0, 1.0).unwrap();
        assert_eq!(srf_pgf(&p, 1.0, 1.3, 0.7).unwrap(), 1.0);
        assert_eq!(srf_pgf(&p, 0.4, 0.0, 0.7).unwrap(), 1.0);
        assert!((srf_pgf(&p, 0.5, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(srf_pgf(&p, 0.0, 1.0, 1.0).is_err());
        // pgf against the pmf series
        let u: f64 = 0.8;
        let series: f64 = (-40..=40).map(|n| srf_pmf(&p, 1.0, 1.0, n).unwrap() * u.powi(n as i32)).sum();
        assert!((series - srf_pgf(&p, u, 1.0, 1.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn invalid_rates() {
        assert!(SkellamParams::new(1.0, 0.0).is_err());
        let bad = SkellamParams { lambda1: 1.0, lambda2: 0.0 };
        assert!(srf_pmf(&bad, 1.0, 1.0, 0).is_err());
    }

    #[test]
    fn infinitesimal_behaviour() {
        let p = SkellamParams::new(2.0, 1.0).unwrap();
        let r = srf_infinitesimal_check(&p, 1e-4).unwrap();
        assert!(r.plus_one < 1e-3 && r.minus_one < 1e-3 && r.zero < 1e-3, "{r:?}");
        assert!(r.big_jump < 1e-3);
        let r10 = srf_infinitesimal_check(&p, 1e-5).unwrap();
        for (a, b) in [(r.plus_one, r10.plus_one), (r.minus_one, r10.minus_one), (r.zero, r10.zero)] {
            let ratio = a / b;
            assert!((8.0..12.0).contains(&ratio), "ratio {ratio}");
        }
    }
}
