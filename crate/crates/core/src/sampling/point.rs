use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::RngStream;
use crate::error::{invalid, Result};

/// Axis-aligned box `prod [lower_i, upper_i]` in `R^M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxRegion {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxRegion {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(invalid("region", "lower and upper must be nonempty and of equal length"));
        }
        for (i, (&a, &b)) in lower.iter().zip(&upper).enumerate() {
            if !a.is_finite() || !b.is_finite() || a > b {
                return Err(invalid("region", format!("axis {i}: [{a}, {b}] is not a finite interval")));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The planar rectangle `[0, s] x [0, t]`.
    pub fn rectangle(s: f64, t: f64) -> Result<Self> {
        Self::new(vec![0.0, 0.0], vec![s, t])
    }

    pub fn unit_square() -> Self {
        Self {
            lower: vec![0.0, 0.0],
            upper: vec![1.0, 1.0],
        }
    }

    pub fn dims(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Lebesgue measure `|B|`.
    pub fn measure(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(a, b)| b - a).product()
    }

    /// `|B1 ∩ B2|`; zero for disjoint boxes or mismatched dimensions.
    pub fn intersection_measure(&self, other: &BoxRegion) -> f64 {
        if self.dims() != other.dims() {
            return 0.0;
        }
        let mut m = 1.0;
        for i in 0..self.dims() {
            let lo = self.lower[i].max(other.lower[i]);
            let hi = self.upper[i].min(other.upper[i]);
            if hi <= lo {
                return 0.0;
            }
            m *= hi - lo;
        }
        m
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.dims()
            && point
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (a, b))| *a <= *x && *x <= *b)
    }
}

/// One realisation of a homogeneous Poisson scatter on a box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointProcessSample {
    pub region: BoxRegion,
    pub points: Vec<Vec<f64>>,
    pub rate: f64,
}

impl PointProcessSample {
    pub fn count(&self) -> usize {
        self.points.len()
    }
}

/// One Poisson(`mean`) draw.
pub fn sample_poisson(mean: f64, rng: &mut RngStream) -> Result<u64> {
    if !(mean >= 0.0) || !mean.is_finite() {
        return Err(invalid("mean", format!("{mean} must be finite and nonnegative")));
    }
    if mean == 0.0 {
        return Ok(0);
    }
    let d = Poisson::new(mean).map_err(|e| invalid("mean", e.to_string()))?;
    Ok(d.sample(rng) as u64)
}

/// Poisson(`rate * |B|`) points placed iid uniformly on `region`.
pub fn sample_point_field(rate: f64, region: &BoxRegion, rng: &mut RngStream) -> Result<PointProcessSample> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(invalid("rate", format!("{rate} must be positive and finite")));
    }
    let n = sample_poisson(rate * region.measure(), rng)?;
    let mut points = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let p = region
            .lower
            .iter()
            .zip(&region.upper)
            .map(|(a, b)| a + (b - a) * rng.random::<f64>())
            .collect();
        points.push(p);
    }
    Ok(PointProcessSample {
        region: region.clone(),
        points,
        rate,
    })
}

/// Number of scattered points dominated coordinatewise by `corner`.
pub fn count_at(sample: &PointProcessSample, corner: &[f64]) -> Result<usize> {
    if corner.len() != sample.region.dims() {
        return Err(invalid("corner", format!("expected {} coordinates", sample.region.dims())));
    }
    Ok(sample
        .points
        .iter()
        .filter(|p| p.iter().zip(corner).all(|(x, c)| x <= c))
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_validation_and_measure() {
        assert!(BoxRegion::new(vec![0.0], vec![-1.0]).is_err());
        assert!(BoxRegion::new(vec![0.0, 0.0], vec![1.0]).is_err());
        let b = BoxRegion::new(vec![0.0, 1.0, -1.0], vec![2.0, 1.5, 1.0]).unwrap();
        assert_eq!(b.measure(), 2.0);
        let a = BoxRegion::unit_square();
        let c = BoxRegion::new(vec![0.5, 0.0], vec![1.5, 1.0]).unwrap();
        assert_eq!(a.intersection_measure(&c), 0.5);
        let d = BoxRegion::new(vec![2.0, 0.0], vec![3.0, 1.0]).unwrap();
        assert_eq!(a.intersection_measure(&d), 0.0);
    }

    #[test]
    fn poisson_zero_mean() {
        let mut r = RngStream::new(0, 0);
        for _ in 0..100 {
            assert_eq!(sample_poisson(0.0, &mut r).unwrap(), 0);
        }
        assert!(sample_poisson(-1.0, &mut r).is_err());
    }

    #[test]
    fn poisson_moments() {
        let mut r = RngStream::new(11, 0);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| sample_poisson(4.0, &mut r).unwrap() as f64).collect();
        let m = xs.iter().sum::<f64>() / n as f64;
        let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64;
        assert!((m - 4.0).abs() < 4.0 * 2.0 / (n as f64).sqrt());
        // Var of the sample variance for Poisson(mu): (mu + 2 mu^2) / n.
        assert!((v - 4.0).abs() < 4.0 * ((4.0 + 32.0) / n as f64).sqrt());
    }

    #[test]
    fn degenerate_region_is_empty() {
        let mut r = RngStream::new(0, 0);
        let b = BoxRegion::new(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
        for _ in 0..50 {
            assert_eq!(sample_point_field(5.0, &b, &mut r).unwrap().count(), 0);
        }
    }

    #[test]
    fn points_inside_and_counts() {
        let mut r = RngStream::new(3, 9);
        let b = BoxRegion::new(vec![1.0, -2.0], vec![3.0, 2.0]).unwrap();
        let s = sample_point_field(3.0, &b, &mut r).unwrap();
        assert!(s.points.iter().all(|p| b.contains(p)));
        assert_eq!(count_at(&s, b.lower()).unwrap(), 0);
        assert_eq!(count_at(&s, b.upper()).unwrap(), s.count());
        assert!(count_at(&s, &[1.0]).is_err());
    }
}
