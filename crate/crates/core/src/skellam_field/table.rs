use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest negative deficit `1 - sum(probs)` absorbed by clamping the tail to 0.
const TAIL_SLACK: f64 = 1e-9;

/// A pmf truncated to the window `n_min..=n_max`, plus the mass outside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmfTable {
    pub n_min: i64,
    pub n_max: i64,
    pub probs: Vec<f64>,
    pub tail_mass: f64,
}

impl PmfTable {
    /// Builds a table with `tail_mass = 1 - sum(probs)`, clamped at 0 when the
    /// overshoot is rounding noise.
    pub fn from_probs(n_min: i64, probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(invalid("probs", "window is empty"));
        }
        let total = neumaier_sum(&probs);
        let deficit = 1.0 - total;
        if deficit < -TAIL_SLACK {
            return Err(Error::Normalization { total });
        }
        let table = Self {
            n_min,
            n_max: n_min + probs.len() as i64 - 1,
            probs,
            tail_mass: deficit.max(0.0),
        };
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_max < self.n_min || (self.n_max - self.n_min + 1) as usize != self.probs.len() {
            return Err(invalid("probs", "length does not match the window"));
        }
        if let Some(p) = self.probs.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
            return Err(invalid("probs", format!("entry {p} is not a probability")));
        }
        if !(self.tail_mass >= 0.0) {
            return Err(invalid("tail_mass", format!("{} is negative", self.tail_mass)));
        }
        let total = neumaier_sum(&self.probs) + self.tail_mass;
        if (total - 1.0).abs() > TAIL_SLACK {
            return Err(Error::Normalization { total });
        }
        Ok(())
    }

    /// `Pr{X = n}`, zero outside the window.
    pub fn prob(&self, n: i64) -> f64 {
        if n < self.n_min || n > self.n_max {
            0.0
        } else {
            self.probs[(n - self.n_min) as usize]
        }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probs.iter().enumerate().map(|(i, &p)| (self.n_min + i as i64, p))
    }

    pub fn window_mass(&self) -> f64 {
        neumaier_sum(&self.probs)
    }

    /// CSV with header `n,prob`; values printed with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let mut out = String::with_capacity(32 * (self.len() + 1));
        out.push_str("n,prob\n");
        for (n, p) in self.iter() {
            out.push_str(&format!("{n},{p:.16e}\n"));
        }
        w.write_all(out.as_bytes()).map_err(|e| Error::Serialization(e.to_string()))
    }

    /// Reads the CSV form; the tail is recomputed from the window mass.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let mut n_min = None;
        let mut expected = 0i64;
        let mut probs = Vec::new();
        for rec in rdr.deserialize::<(i64, f64)>() {
            let (n, p) = rec.map_err(|e| Error::Serialization(e.to_string()))?;
            match n_min {
                None => {
                    n_min = Some(n);
                    expected = n;
                }
                Some(_) if n != expected => {
                    return Err(Error::Serialization(format!("expected n = {expected}, found {n}")));
                }
                _ => {}
            }
            probs.push(p);
            expected += 1;
        }
        let n_min = n_min.ok_or_else(|| Error::Serialization("no rows".into()))?;
        Self::from_probs(n_min, probs)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let t: Self = serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
        t.validate()?;
        Ok(t)
    }
}

pub(crate) fn neumaier_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for &x in xs {
        let s = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - s) + x;
        } else {
            comp += (x - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_table() -> PmfTable {
        PmfTable::from_probs(-2, vec![0.1, 0.2, 0.3, 0.25, 0.1]).unwrap()
    }

    #[test]
    fn tail_and_lookup() {
        let t = sample_table();
        assert_eq!(t.n_max, 2);
        assert!((t.tail_mass - 0.05).abs() < 1e-15);
        assert_eq!(t.prob(0), 0.3);
        assert_eq!(t.prob(5), 0.0);
    }

    #[test]
    fn overshoot_rejected_or_clamped() {
        assert!(matches!(PmfTable::from_probs(0, vec![0.6, 0.6]), Err(Error::Normalization { .. })));
        let t = PmfTable::from_probs(0, vec![0.5, 0.5 + 1e-12]).unwrap();
        assert_eq!(t.tail_mass, 0.0);
        assert!(PmfTable::from_probs(0, vec![-0.1, 0.5]).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let t = PmfTable::from_probs(-1, vec![1.0 / 3.0, 0.1 + 0.2, 1e-300]).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n,prob\n"));
        assert!(!text.contains('\r'));
        let back = PmfTable::read_csv(&buf[..]).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn json_round_trip() {
        let t = sample_table();
        assert_eq!(PmfTable::from_json(&t.to_json().unwrap()).unwrap(), t);
    }

    #[test]
    fn csv_gap_rejected() {
        let text = "n,prob\n0,0.5\n2,0.5\n";
        assert!(PmfTable::read_csv(text.as_bytes()).is_err());
    }
}
