use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::ln_factorial;

/// Observed counts with their frequencies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyData {
    /// `(value, frequency)` pairs with strictly increasing values.
    counts: Vec<(usize, u64)>,
    truncated_at_zero: bool,
}

impl FrequencyData {
    pub fn new(counts: Vec<(usize, u64)>, truncated_at_zero: bool) -> Result<Self> {
        if counts.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidData(
                "values must be strictly increasing".into(),
            ));
        }
        if counts.iter().map(|c| c.1).sum::<u64>() == 0 {
            return Err(Error::InvalidData(
                "total frequency must be positive".into(),
            ));
        }
        if truncated_at_zero && counts.first().is_some_and(|c| c.0 == 0) {
            return Err(Error::InvalidData(
                "zero-truncated data cannot contain the value 0".into(),
            ));
        }
        Ok(Self {
            counts,
            truncated_at_zero,
        })
    }

    /// Frequencies for the consecutive values `start, start+1, …`.
    pub fn from_frequencies(start: usize, freqs: &[u64], truncated_at_zero: bool) -> Result<Self> {
        Self::new(
            freqs
                .iter()
                .enumerate()
                .map(|(i, &f)| (start + i, f))
                .collect(),
            truncated_at_zero,
        )
    }

    /// Tabulates raw observations.
    pub fn from_observations(obs: &[usize], truncated_at_zero: bool) -> Result<Self> {
        let max = obs
            .iter()
            .copied()
            .max()
            .ok_or_else(|| Error::InvalidData("no observations".into()))?;
        let mut freq = vec![0u64; max + 1];
        for &x in obs {
            freq[x] += 1;
        }
        Self::new(
            freq.into_iter()
                .enumerate()
                .filter(|&(_, f)| f > 0)
                .collect(),
            truncated_at_zero,
        )
    }

    pub fn counts(&self) -> &[(usize, u64)] {
        &self.counts
    }

    pub fn truncated_at_zero(&self) -> bool {
        self.truncated_at_zero
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|c| c.1).sum()
    }

    /// Largest value with a positive frequency.
    pub fn max_value(&self) -> usize {
        self.counts
            .iter()
            .rev()
            .find(|c| c.1 > 0)
            .map_or(0, |c| c.0)
    }

    pub fn frequency(&self, value: usize) -> u64 {
        self.counts
            .binary_search_by_key(&value, |c| c.0)
            .map_or(0, |i| self.counts[i].1)
    }

    pub fn mean(&self) -> f64 {
        let s: f64 = self.counts.iter().map(|&(x, f)| x as f64 * f as f64).sum();
        s / self.total() as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        let s: f64 = self
            .counts
            .iter()
            .map(|&(x, f)| f as f64 * (x as f64 - m).powi(2))
            .sum();
        s / self.total() as f64
    }

    /// The data mirrored through `x ↦ n − x`.
    pub fn reflected(&self, n: usize) -> Result<Self> {
        if self.max_value() > n {
            return Err(Error::InvalidData(format!(
                "value {} exceeds n = {n}",
                self.max_value()
            )));
        }
        let mut counts: Vec<(usize, u64)> = self
            .counts
            .iter()
            .filter(|c| c.0 <= n)
            .map(|&(x, f)| (n - x, f))
            .collect();
        counts.reverse();
        Self::new(counts, false)
    }
}

/// Per-observation sufficient statistics of the MCMPB family for a fixed `n`:
/// `s1 = Σ i f_i / N`, `s2 = −Σ f_i log i! / N`, `s3 = −Σ f_i log (n−i)! / N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SufficientStats {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub n: usize,
}

impl SufficientStats {
    pub fn compute(data: &FrequencyData, n: usize) -> Result<Self> {
        if data.max_value() > n {
            return Err(Error::InvalidData(format!(
                "observed value {} exceeds n = {n}",
                data.max_value()
            )));
        }
        let total = data.total() as f64;
        let (mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0);
        for &(x, f) in data.counts() {
            if f == 0 {
                continue;
            }
            let f = f as f64;
            s1 += f * x as f64;
            s2 -= f * ln_factorial(x);
            s3 -= f * ln_factorial(n - x);
        }
        Ok(Self {
            s1: s1 / total,
            s2: s2 / total,
            s3: s3 / total,
            n,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(FrequencyData::new(vec![(1, 3), (1, 2)], false).is_err());
        assert!(FrequencyData::new(vec![(0, 0), (1, 0)], false).is_err());
        assert!(FrequencyData::new(vec![(0, 1), (1, 2)], true).is_err());
        assert!(FrequencyData::new(vec![(1, 1), (2, 2)], true).is_ok());
        assert!(FrequencyData::from_observations(&[], false).is_err());
    }

    #[test]
    fn summaries() {
        let d = FrequencyData::from_observations(&[0, 2, 2, 5, 5, 5], false).unwrap();
        assert_eq!(d.total(), 6);
        assert_eq!(d.max_value(), 5);
        assert_eq!(d.frequency(5), 3);
        assert_eq!(d.frequency(1), 0);
        assert!((d.mean() - 19.0 / 6.0).abs() < 1e-15);
        let r = d.reflected(5).unwrap();
        assert_eq!(r.counts(), &[(0, 3), (3, 2), (5, 1)]);
    }

    #[test]
    fn sufficient_statistics_signs() {
        let d = FrequencyData::from_frequencies(0, &[1, 2, 3], false).unwrap();
        let s = SufficientStats::compute(&d, 4).unwrap();
        assert!((s.s1 - 8.0 / 6.0).abs() < 1e-15);
        assert!(s.s2 <= 0.0 && s.s3 <= 0.0);
        assert!(SufficientStats::compute(&d, 1).is_err());
    }
}
