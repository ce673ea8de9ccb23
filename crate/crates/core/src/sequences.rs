//! Degree sequences and community-size sequences.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Reverse;
use rand::Rng;

use crate::distspec::PowerLawSpec;
use crate::{Error, Result};

/// Node degrees `w_i`, sorted non-increasing, with an even total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    degrees: Vec<u32>,
}

impl DegreeSequence {
    /// Wraps an explicit sequence. Degrees must be positive with an even sum.
    pub fn from_explicit(mut degrees: Vec<u32>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidParameter("degree sequence is empty"));
        }
        if degrees.contains(&0) {
            return Err(Error::InvalidParameter("degrees must be at least 1"));
        }
        if degrees.iter().map(|&d| d as u64).sum::<u64>() % 2 == 1 {
            return Err(Error::InvalidParameter("degree sequence has an odd sum"));
        }
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { degrees })
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Total volume `W`.
    pub fn volume(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64).sum()
    }

    pub fn min_degree(&self) -> u32 {
        *self.degrees.last().expect("non-empty")
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees[0]
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.degrees
    }
}

/// Draws `n` degrees from `spec`, sorts them and fixes the parity of the sum.
///
/// An odd total is repaired by raising one minimum-degree node, or, when
/// every node already sits at the maximum, lowering one of them. When the
/// range is a single value and `n * value` is odd no repair stays in range
/// and [`Error::InfeasibleParity`] is returned.
pub fn generate_degrees<R: Rng + ?Sized>(
    spec: &PowerLawSpec,
    n: usize,
    rng: &mut R,
) -> Result<DegreeSequence> {
    if n == 0 {
        return Err(Error::InvalidParameter("number of nodes must be positive"));
    }
    let mut degrees = spec.sample(n, rng);
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    let volume: u64 = degrees.iter().map(|&d| d as u64).sum();
    if volume % 2 == 1 {
        fix_parity(&mut degrees, spec.min(), spec.max())?;
    }
    Ok(DegreeSequence { degrees })
}

fn fix_parity(sorted_desc: &mut [u32], min: u32, max: u32) -> Result<()> {
    let lowest = *sorted_desc.last().expect("non-empty");
    if lowest < max {
        // leftmost copy of the minimum, so order is preserved
        let at = sorted_desc.partition_point(|&d| d > lowest);
        sorted_desc[at] += 1;
        return Ok(());
    }
    let highest = sorted_desc[0];
    if highest > min {
        let at = sorted_desc.partition_point(|&d| d >= highest) - 1;
        sorted_desc[at] -= 1;
        return Ok(());
    }
    Err(Error::InfeasibleParity)
}

/// Smallest minimum degree whose power law reaches average `target_avg`.
pub fn solve_min_degree(gamma: f64, target_avg: f64, max_degree: u32) -> Result<u32> {
    if !(target_avg.is_finite() && target_avg >= 1.0) {
        return Err(Error::InvalidParameter("average degree must be at least 1"));
    }
    if target_avg > max_degree as f64 {
        return Err(Error::InfeasibleAverage {
            target: target_avg,
            max: max_degree,
        });
    }
    let mean = |delta: u32| PowerLawSpec::new(gamma, delta, max_degree).map(|s| s.expected_value());
    // the mean grows with delta, so binary search for the first hit
    let (mut lo, mut hi) = (1u32, max_degree);
    if mean(hi)? < target_avg {
        return Err(Error::InfeasibleAverage {
            target: target_avg,
            max: max_degree,
        });
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if mean(mid)? >= target_avg {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// Community sizes `s_j`, sorted non-increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunitySizes {
    sizes: Vec<u32>,
}

impl CommunitySizes {
    /// Wraps an explicit list of positive sizes.
    pub fn from_explicit(mut sizes: Vec<u32>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::InvalidParameter("community sizes must be positive"));
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { sizes })
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.sizes
    }

    /// Number of communities.
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().map(|&s| s as usize).sum()
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.sizes
    }
}

/// Draws community sizes from `spec` until they cover `target_total`, then
/// trims the overshoot so the sizes sum to exactly `target_total`.
///
/// If the last draw can absorb the overshoot it is shrunk. Otherwise it is
/// dropped and the missing mass is handed out one node at a time to the
/// currently smallest communities below the maximum size.
pub fn generate_community_sizes<R: Rng + ?Sized>(
    spec: &PowerLawSpec,
    target_total: usize,
    rng: &mut R,
) -> Result<CommunitySizes> {
    let infeasible = Error::InfeasibleSizes {
        target: target_total,
    };
    if target_total < spec.min() as usize {
        return Err(infeasible);
    }
    let sampler = spec.sampler();
    let mut sizes = Vec::new();
    let mut sum = 0usize;
    while sum < target_total {
        let s = sampler.draw(rng);
        sum += s as usize;
        sizes.push(s);
    }
    let overshoot = (sum - target_total) as u32;
    if overshoot > 0 {
        let last = sizes.pop().expect("at least one draw");
        if last - overshoot >= spec.min() {
            sizes.push(last - overshoot);
        } else {
            let mut deficit = last - overshoot;
            let mut heap: BinaryHeap<Reverse<(u32, usize)>> = sizes
                .iter()
                .enumerate()
                .filter(|(_, &s)| s < spec.max())
                .map(|(i, &s)| Reverse((s, i)))
                .collect();
            while deficit > 0 {
                let Reverse((s, i)) = heap.pop().ok_or(infeasible.clone())?;
                sizes[i] = s + 1;
                deficit -= 1;
                if s + 1 < spec.max() {
                    heap.push(Reverse((s + 1, i)));
                }
            }
        }
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Ok(CommunitySizes { sizes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn spec(g: f64, lo: u32, hi: u32) -> PowerLawSpec {
        PowerLawSpec::new(g, lo, hi).unwrap()
    }

    #[test]
    fn constant_degrees_even_volume() {
        let d = generate_degrees(&spec(2.0, 3, 3), 4, &mut rng::stream(0, 0)).unwrap();
        assert_eq!(d.as_slice(), &[3, 3, 3, 3]);
        assert_eq!(d.volume(), 12);
    }

    #[test]
    fn constant_odd_volume_rejected() {
        // 3 * 3 = 9 is odd and no in-range repair exists
        let err = generate_degrees(&spec(2.0, 3, 3), 3, &mut rng::stream(0, 0)).unwrap_err();
        assert_eq!(err, Error::InfeasibleParity);
    }

    #[test]
    fn parity_fix_raises_minimum() {
        let mut d = vec![9, 5, 5, 4, 4];
        fix_parity(&mut d, 4, 10).unwrap();
        assert_eq!(d, vec![9, 5, 5, 5, 4]);
    }

    #[test]
    fn parity_fix_lowers_maximum_when_all_at_max() {
        let mut d = vec![7, 7, 7];
        fix_parity(&mut d, 2, 7).unwrap();
        assert_eq!(d, vec![7, 7, 6]);
    }

    #[test]
    fn default_degrees_respect_range() {
        let d = generate_degrees(&spec(2.5, 5, 500), 10_000, &mut rng::stream(9, 0)).unwrap();
        assert_eq!(d.len(), 10_000);
        assert!(d.max_degree() <= 500 && d.min_degree() >= 5);
        assert_eq!(d.volume() % 2, 0);
        assert!(d.as_slice().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn min_degree_point_mass() {
        for g in [0.5, 2.5, 3.7] {
            assert_eq!(solve_min_degree(g, 5.0, 5).unwrap(), 5);
        }
    }

    #[test]
    fn min_degree_unreachable() {
        assert!(matches!(
            solve_min_degree(2.5, 6.0, 5),
            Err(Error::InfeasibleAverage { .. })
        ));
        assert!(solve_min_degree(2.5, 0.5, 5).is_err());
    }

    #[test]
    fn min_degree_matches_exhaustive_scan() {
        let scan = |g: f64, avg: f64, max: u32| {
            (1..=max)
                .find(|&d| spec(g, d, max).expected_value() >= avg)
                .unwrap()
        };
        assert_eq!(
            solve_min_degree(2.5, 10.0, 100).unwrap(),
            scan(2.5, 10.0, 100)
        );
        for &(g, avg, max) in &[(2.1, 7.5, 50), (3.0, 20.0, 1000), (1.5, 3.0, 10)] {
            assert_eq!(solve_min_degree(g, avg, max).unwrap(), scan(g, avg, max));
        }
    }

    #[test]
    fn forced_sizes() {
        let s = generate_community_sizes(&spec(1.5, 50, 50), 150, &mut rng::stream(0, 1)).unwrap();
        assert_eq!(s.as_slice(), &[50, 50, 50]);
        assert!(generate_community_sizes(&spec(1.5, 50, 50), 40, &mut rng::stream(0, 1)).is_err());
        assert!(generate_community_sizes(&spec(1.5, 50, 50), 120, &mut rng::stream(0, 1)).is_err());
    }

    #[test]
    fn default_sizes_sum_exactly() {
        let s =
            generate_community_sizes(&spec(1.5, 100, 1000), 9500, &mut rng::stream(4, 1)).unwrap();
        assert_eq!(s.total(), 9500);
        assert!(s.as_slice().iter().all(|&x| (100..=1000).contains(&x)));
    }

    #[test]
    fn sizes_sum_exactly_over_many_seeds() {
        let sp = spec(1.5, 100, 1000);
        for seed in 0..1000 {
            let s = generate_community_sizes(&sp, 9500, &mut rng::stream(seed, 1)).unwrap();
            assert_eq!(s.total(), 9500, "seed {seed}");
            assert!(s.as_slice().iter().all(|&x| (100..=1000).contains(&x)));
        }
    }

    proptest::proptest! {
        #[test]
        fn degrees_differ_from_raw_draw_by_one_unit(
            g in 1.5f64..3.5, lo in 1u32..10, span in 1u32..100, n in 1usize..400, seed: u64,
        ) {
            let sp = spec(g, lo, lo + span);
            let mut raw = sp.sample(n, &mut rng::stream(seed, 0));
            raw.sort_unstable_by(|a, b| b.cmp(a));
            let d = generate_degrees(&sp, n, &mut rng::stream(seed, 0)).unwrap();
            let diff: u64 = raw.iter().zip(d.as_slice()).map(|(a, b)| a.abs_diff(*b) as u64).sum();
            proptest::prop_assert!(diff <= 1);
            proptest::prop_assert_eq!(d.volume() % 2, 0);
        }
    }
}
