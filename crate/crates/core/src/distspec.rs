//! Truncated discrete power laws.
//!
//! `P(k) ∝ k^(-exponent)` on the integers `min..=max`. Used for degrees
//! (exponent gamma, range delta..Delta) and community sizes (exponent beta,
//! range s..S).

use alloc::vec::Vec;
use rand::Rng;

use crate::{Error, Result};

/// Truncated discrete power law on `min..=max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawSpec {
    exponent: f64,
    min: u32,
    max: u32,
}

impl PowerLawSpec {
    pub fn new(exponent: f64, min: u32, max: u32) -> Result<Self> {
        if !(exponent.is_finite() && exponent > 0.0) {
            return Err(Error::InvalidParameter(
                "power-law exponent must be positive",
            ));
        }
        if min == 0 || min > max {
            return Err(Error::InvalidParameter(
                "power-law range needs 1 <= min <= max",
            ));
        }
        Ok(Self { exponent, min, max })
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn min(&self) -> u32 {
        self.min
    }

    pub fn max(&self) -> u32 {
        self.max
    }

    /// Number of support points.
    pub fn support_len(&self) -> usize {
        (self.max - self.min) as usize + 1
    }

    fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        (self.min..=self.max).map(move |k| libm::pow(k as f64, -self.exponent))
    }

    /// Probability of each value in `min..=max`, in order.
    pub fn pmf(&self) -> Vec<f64> {
        let weights: Vec<f64> = self.weights().collect();
        let total: f64 = weights.iter().sum();
        weights.into_iter().map(|w| w / total).collect()
    }

    /// Mean of the distribution.
    pub fn expected_value(&self) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for (k, w) in (self.min..=self.max).zip(self.weights()) {
            num += k as f64 * w;
            den += w;
        }
        num / den
    }

    /// Precomputes the cumulative table for repeated draws.
    pub fn sampler(&self) -> PowerLawSampler {
        let mut cumulative = Vec::with_capacity(self.support_len());
        let mut acc = 0.0;
        for w in self.weights() {
            acc += w;
            cumulative.push(acc);
        }
        PowerLawSampler {
            min: self.min,
            cumulative,
        }
    }

    /// `count` independent draws.
    pub fn sample<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<u32> {
        let sampler = self.sampler();
        (0..count).map(|_| sampler.draw(rng)).collect()
    }
}

/// Inverse-CDF sampler over a cumulative weight table.
#[derive(Debug, Clone)]
pub struct PowerLawSampler {
    min: u32,
    cumulative: Vec<f64>,
}

impl PowerLawSampler {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let total = *self.cumulative.last().expect("non-empty support");
        let u = rng.gen::<f64>() * total;
        let idx = self
            .cumulative
            .partition_point(|&c| c <= u)
            .min(self.cumulative.len() - 1);
        self.min + idx as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn degenerate_support_is_point_mass() {
        let spec = PowerLawSpec::new(2.5, 5, 5).unwrap();
        assert_eq!(spec.pmf(), vec![1.0]);
        assert_eq!(spec.expected_value(), 5.0);
        let mut r = rng::stream(1, 0);
        assert_eq!(
            PowerLawSpec::new(1.3, 7, 7).unwrap().sample(3, &mut r),
            vec![7, 7, 7]
        );
        assert!(spec.sample(0, &mut r).is_empty());
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(PowerLawSpec::new(0.0, 1, 2).is_err());
        assert!(PowerLawSpec::new(-1.0, 1, 2).is_err());
        assert!(PowerLawSpec::new(f64::NAN, 1, 2).is_err());
        assert!(PowerLawSpec::new(2.0, 0, 2).is_err());
        assert!(PowerLawSpec::new(2.0, 3, 2).is_err());
    }

    #[test]
    fn harmonic_two_point() {
        let spec = PowerLawSpec::new(1.0, 1, 2).unwrap();
        let pmf = spec.pmf();
        assert!((pmf[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((pmf[1] - 1.0 / 3.0).abs() < 1e-15);
        assert!((spec.expected_value() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn pmf_sums_to_one() {
        for &(g, lo, hi) in &[(2.5, 5, 500), (1.5, 100, 1000), (0.3, 1, 10_000)] {
            let s: f64 = PowerLawSpec::new(g, lo, hi).unwrap().pmf().iter().sum();
            assert!((s - 1.0).abs() < 1e-12, "{s}");
        }
    }

    #[test]
    fn expected_value_monotone_in_max() {
        let mut prev = 0.0;
        for hi in 5..200 {
            let e = PowerLawSpec::new(2.5, 5, hi).unwrap().expected_value();
            assert!(e >= prev);
            prev = e;
        }
    }

    #[test]
    fn empirical_mean_matches_expected_value() {
        let spec = PowerLawSpec::new(2.5, 5, 500).unwrap();
        let mut r = rng::stream(42, 0);
        let draws = spec.sample(1_000_000, &mut r);
        let mean = draws.iter().map(|&d| d as f64).sum::<f64>() / draws.len() as f64;
        let expected = spec.expected_value();
        assert!(
            (mean - expected).abs() / expected < 0.01,
            "{mean} vs {expected}"
        );
    }

    #[test]
    fn empirical_frequencies_match_pmf() {
        let spec = PowerLawSpec::new(1.0, 1, 4).unwrap();
        let mut r = rng::stream(3, 0);
        let mut counts = [0usize; 4];
        let n = 200_000;
        for d in spec.sample(n, &mut r) {
            counts[(d - 1) as usize] += 1;
        }
        for (c, p) in counts.iter().zip(spec.pmf()) {
            assert!((*c as f64 / n as f64 - p).abs() < 0.005);
        }
    }

    proptest::proptest! {
        #[test]
        fn samples_in_range_and_reproducible(
            g in 0.1f64..4.0, lo in 1u32..50, span in 0u32..300, seed: u64,
        ) {
            let spec = PowerLawSpec::new(g, lo, lo + span).unwrap();
            let a = spec.sample(200, &mut rng::stream(seed, 0));
            let b = spec.sample(200, &mut rng::stream(seed, 0));
            proptest::prop_assert_eq!(&a, &b);
            proptest::prop_assert!(a.iter().all(|&d| d >= lo && d <= lo + span));
        }
    }
}
