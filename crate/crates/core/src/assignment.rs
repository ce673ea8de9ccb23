//! Outlier selection, community assignment and the degree split.
//!
//! Nodes are identified by their position in the (non-increasing)
//! [`DegreeSequence`], so node 0 has the largest degree.

use alloc::vec;
use alloc::vec::Vec;
use rand::seq::index;
use rand::Rng;

use crate::sequences::{CommunitySizes, DegreeSequence};
use crate::{Error, Result};

/// Label stored for outliers. Communities are labeled `1..=ℓ`.
pub const OUTLIER: u32 = 0;

/// Ground-truth label of every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeAssignment {
    labels: Vec<u32>,
    communities: usize,
}

impl NodeAssignment {
    /// Builds an assignment from raw labels (`0` = outlier, `1..=ℓ`).
    pub fn from_labels(labels: Vec<u32>) -> Result<Self> {
        let communities = labels.iter().copied().max().unwrap_or(0) as usize;
        let mut seen = vec![false; communities];
        for &l in &labels {
            if l != OUTLIER {
                seen[l as usize - 1] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidPartition);
        }
        Ok(Self {
            labels,
            communities,
        })
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_communities(&self) -> usize {
        self.communities
    }

    pub fn is_outlier(&self, node: usize) -> bool {
        self.labels[node] == OUTLIER
    }

    /// Zero-based community of `node`, `None` for outliers.
    pub fn community(&self, node: usize) -> Option<usize> {
        match self.labels[node] {
            OUTLIER => None,
            l => Some(l as usize - 1),
        }
    }

    pub fn outlier_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l == OUTLIER).count()
    }

    pub fn outlier_flags(&self) -> Vec<bool> {
        self.labels.iter().map(|&l| l == OUTLIER).collect()
    }

    /// Nodes of each community, ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.communities];
        for (node, c) in (0..self.labels.len()).filter_map(|i| self.community(i).map(|c| (i, c))) {
            out[c].push(node);
        }
        out
    }
}

/// Community degree `y_i` and background degree `z_i` per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSplit {
    pub community: Vec<u32>,
    pub background: Vec<u32>,
}

/// Expected number of nodes with positive background degree,
/// `Σ min(1, xi * w_i)`.
pub fn expected_background_count(degrees: &DegreeSequence, xi: f64) -> f64 {
    degrees
        .as_slice()
        .iter()
        .map(|&w| (xi * w as f64).min(1.0))
        .sum()
}

/// Largest degree an outlier may have.
pub fn outlier_degree_bound(degrees: &DegreeSequence, outliers: usize, xi: f64) -> f64 {
    let l = expected_background_count(degrees, xi);
    let s0 = outliers as f64;
    l + s0 - l * s0 / degrees.len() as f64 - 1.0
}

/// Picks `count` outliers uniformly among nodes under the degree bound.
/// Returns node ids in ascending order.
pub fn select_outliers<R: Rng + ?Sized>(
    degrees: &DegreeSequence,
    count: usize,
    xi: f64,
    rng: &mut R,
) -> Result<Vec<usize>> {
    check_xi(xi)?;
    if count == 0 {
        return Ok(Vec::new());
    }
    let bound = outlier_degree_bound(degrees, count, xi);
    let eligible: Vec<usize> = degrees
        .as_slice()
        .iter()
        .enumerate()
        .filter(|(_, &w)| w as f64 <= bound)
        .map(|(i, _)| i)
        .collect();
    if eligible.len() < count {
        return Err(Error::InfeasibleOutliers {
            eligible: eligible.len(),
            requested: count,
        });
    }
    let mut chosen: Vec<usize> = index::sample(rng, eligible.len(), count)
        .into_iter()
        .map(|i| eligible[i])
        .collect();
    chosen.sort_unstable();
    Ok(chosen)
}

/// Expected fraction `phi` of a non-outlier's background edges that leave
/// its community.
///
/// With no outliers the correction factor is 1 for every `xi`, which
/// reduces to `1 - Σ (s_j / n)^2`.
pub fn compute_phi(sizes: &CommunitySizes, n: usize, outliers: usize, xi: f64) -> f64 {
    let regular = (n - outliers) as f64;
    let correction = if outliers == 0 {
        1.0
    } else {
        regular * xi / (regular * xi + outliers as f64)
    };
    let concentration: f64 = sizes
        .as_slice()
        .iter()
        .map(|&s| {
            let f = s as f64 / regular;
            f * f
        })
        .sum();
    1.0 - concentration * correction
}

/// Expected number of neighbors in the node's own community, `(1 - xi*phi) w`.
pub fn internal_degree_target(w: u32, xi: f64, phi: f64) -> f64 {
    (1.0 - xi * phi) * w as f64
}

/// Assigns non-outliers to communities.
///
/// Nodes are handled by non-increasing internal target `x_i`; each picks a
/// community among those with `s_j - 1 >= x_i`, with probability
/// proportional to the community's remaining capacity. The admissible set
/// only grows as `x_i` decreases, so this succeeds whenever any admissible
/// assignment exists.
pub fn assign_communities<R: Rng + ?Sized>(
    degrees: &DegreeSequence,
    outliers: &[usize],
    sizes: &CommunitySizes,
    xi: f64,
    rng: &mut R,
) -> Result<NodeAssignment> {
    check_xi(xi)?;
    let n = degrees.len();
    if sizes.total() + outliers.len() != n {
        return Err(Error::InvalidParameter(
            "community sizes plus outliers must equal the node count",
        ));
    }
    let phi = compute_phi(sizes, n, outliers.len(), xi);
    let community_sizes = sizes.as_slice();
    let mut labels = vec![u32::MAX; n];
    for &o in outliers {
        labels[o] = OUTLIER;
    }
    let mut capacity = Fenwick::new(community_sizes.iter().map(|&s| s as u64));
    // degrees are sorted, so node order is already non-increasing in x_i
    for (node, &w) in degrees.as_slice().iter().enumerate() {
        if labels[node] == OUTLIER {
            continue;
        }
        let x = internal_degree_target(w, xi, phi);
        let admissible = community_sizes.partition_point(|&s| s as f64 - 1.0 >= x);
        let room = capacity.prefix_sum(admissible);
        if room == 0 {
            return Err(Error::InfeasibleAssignment { node });
        }
        let target = capacity.find(rng.gen_range(0..room));
        debug_assert!(target < admissible);
        capacity.sub_one(target);
        labels[node] = target as u32 + 1;
    }
    Ok(NodeAssignment {
        labels,
        communities: community_sizes.len(),
    })
}

/// Rounds `(1 - xi) w` down or up, rounding up with probability equal to
/// the fractional part.
pub(crate) fn random_round<R: Rng + ?Sized>(w: u32, xi: f64, rng: &mut R) -> u32 {
    let target = w as f64 * (1.0 - xi);
    let nearest = libm::round(target);
    if (target - nearest).abs() < 1e-9 {
        return nearest as u32;
    }
    let floor = libm::floor(target);
    let up = rng.gen::<f64>() < target - floor;
    (floor as u32 + up as u32).min(w)
}

/// Splits each degree into community and background parts.
///
/// Outliers keep everything in the background. Other nodes round
/// `(1 - xi) w_i` randomly; a community with an odd total then has one
/// uniformly chosen member moved by one unit (up if that stays within
/// `w_i`, down otherwise).
pub fn split_degrees<R: Rng + ?Sized>(
    assignment: &NodeAssignment,
    degrees: &DegreeSequence,
    xi: f64,
    rng: &mut R,
) -> Result<DegreeSplit> {
    check_xi(xi)?;
    let w = degrees.as_slice();
    if w.len() != assignment.len() {
        return Err(Error::InvalidParameter(
            "assignment and degrees differ in length",
        ));
    }
    let mut community = vec![0u32; w.len()];
    for (node, y) in community.iter_mut().enumerate() {
        if !assignment.is_outlier(node) {
            *y = random_round(w[node], xi, rng);
        }
    }
    for members in assignment.members() {
        let total: u64 = members.iter().map(|&i| community[i] as u64).sum();
        if total % 2 == 1 {
            let node = members[rng.gen_range(0..members.len())];
            if community[node] < w[node] {
                community[node] += 1;
            } else {
                community[node] -= 1;
            }
        }
    }
    let background = w.iter().zip(&community).map(|(&w, &y)| w - y).collect();
    Ok(DegreeSplit {
        community,
        background,
    })
}

fn check_xi(xi: f64) -> Result<()> {
    if (0.0..=1.0).contains(&xi) {
        Ok(())
    } else {
        Err(Error::InvalidParameter("xi must lie in [0, 1]"))
    }
}

/// Binary indexed tree over remaining community capacities.
struct Fenwick {
    tree: Vec<u64>,
}

impl Fenwick {
    fn new(values: impl Iterator<Item = u64>) -> Self {
        let mut tree = vec![0];
        tree.extend(values);
        for i in 1..tree.len() {
            let parent = i + (i & i.wrapping_neg());
            if parent < tree.len() {
                tree[parent] += tree[i];
            }
        }
        Self { tree }
    }

    /// Sum of the first `len` values.
    fn prefix_sum(&self, len: usize) -> u64 {
        let mut i = len;
        let mut acc = 0;
        while i > 0 {
            acc += self.tree[i];
            i &= i - 1;
        }
        acc
    }

    fn sub_one(&mut self, idx: usize) {
        let mut i = idx + 1;
        while i < self.tree.len() {
            self.tree[i] -= 1;
            i += i & i.wrapping_neg();
        }
    }

    /// Smallest index whose inclusive prefix sum exceeds `target`.
    fn find(&self, mut target: u64) -> usize {
        let mut pos = 0;
        let mut step = (self.tree.len() - 1).next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= target {
                target -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        pos
    }
}
