//! Per-node outlier scores, community predicates and AUC evaluation.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, Partition};
use crate::{Error, Result};

/// Counts neighbors of `v` per part into `counts`, recording touched parts.
fn neighbor_counts(
    graph: &Graph,
    partition: &Partition,
    v: usize,
    counts: &mut [u32],
    touched: &mut Vec<usize>,
) {
    for &u in graph.neighbors(v) {
        let c = partition.label(u as usize);
        if counts[c] == 0 {
            touched.push(c);
        }
        counts[c] += 1;
    }
}

/// Participation coefficient `p(v) = 1 - Σ_i (deg_{A_i}(v) / deg(v))^2`.
/// `None` for isolated nodes.
pub fn participation(graph: &Graph, partition: &Partition) -> Vec<Option<f64>> {
    per_node_fractions(graph, partition, |fractions| {
        1.0 - fractions.map(|f| f * f).sum::<f64>()
    })
}

/// Entropy of the neighbor community distribution,
/// `-Σ_i p_i ln p_i` with `p_i = deg_{A_i}(v) / deg(v)`.
///
/// Stand-in for embedding-derived distributions; see [`entropy`] for
/// arbitrary rows.
pub fn neighbor_entropy(graph: &Graph, partition: &Partition) -> Vec<Option<f64>> {
    per_node_fractions(graph, partition, |fractions| {
        -fractions.map(|f| f * libm::log(f)).sum::<f64>()
    })
}

fn per_node_fractions(
    graph: &Graph,
    partition: &Partition,
    score: impl Fn(&mut dyn Iterator<Item = f64>) -> f64,
) -> Vec<Option<f64>> {
    let mut counts = vec![0u32; partition.count()];
    let mut touched = Vec::new();
    (0..graph.node_count())
        .map(|v| {
            let d = graph.degree(v);
            if d == 0 {
                return None;
            }
            neighbor_counts(graph, partition, v, &mut counts, &mut touched);
            let mut fractions = touched.iter().map(|&c| counts[c] as f64 / d as f64);
            let s = score(&mut fractions);
            for &c in &touched {
                counts[c] = 0;
            }
            touched.clear();
            Some(s)
        })
        .collect()
}

/// Community association strength
/// `d(v) = deg_{A}(v) / deg(v) - vol(A) / vol(V)` for the part `A` of `v`.
pub fn association_strength(graph: &Graph, partition: &Partition) -> Vec<Option<f64>> {
    let volumes = partition.volumes(graph);
    let total = graph.volume() as f64;
    (0..graph.node_count())
        .map(|v| {
            let d = graph.degree(v);
            if d == 0 {
                return None;
            }
            let own = partition.label(v);
            let inside = graph
                .neighbors(v)
                .iter()
                .filter(|&&u| partition.label(u as usize) == own)
                .count();
            Some(inside as f64 / d as f64 - volumes[own] as f64 / total)
        })
        .collect()
}

/// Entropy `-Σ p ln p` of one probability row, with `0 ln 0 = 0`.
pub fn entropy_row(row: &[f64]) -> Result<f64> {
    let sum: f64 = row.iter().sum();
    if row.iter().any(|&p| p.is_nan() || p < 0.0) || (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution { row: 0 });
    }
    Ok(-row
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * libm::log(p))
        .sum::<f64>())
}

/// Entropy of each row of a node-by-community probability table.
pub fn entropy<T: AsRef<[f64]>>(rows: &[T]) -> Result<Vec<f64>> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| entropy_row(r.as_ref()).map_err(|_| Error::InvalidDistribution { row: i }))
        .collect()
}

fn inside_outside(graph: &Graph, members: &[usize]) -> (Vec<bool>, Vec<(usize, usize)>) {
    let mut mask = vec![false; graph.node_count()];
    for &v in members {
        mask[v] = true;
    }
    let counts = members
        .iter()
        .map(|&v| {
            let inside = graph
                .neighbors(v)
                .iter()
                .filter(|&&u| mask[u as usize])
                .count();
            (inside, graph.degree(v) - inside)
        })
        .collect();
    (mask, counts)
}

/// Every member has more neighbors inside the set than outside.
pub fn is_strong_community(graph: &Graph, members: &[usize]) -> bool {
    !members.is_empty() && inside_outside(graph, members).1.iter().all(|&(i, o)| i > o)
}

/// Average inside degree over members exceeds average outside degree.
pub fn is_weak_community(graph: &Graph, members: &[usize]) -> bool {
    if members.is_empty() {
        return false;
    }
    let (_, counts) = inside_outside(graph, members);
    let k = members.len() as f64;
    let inside = counts.iter().map(|c| c.0).sum::<usize>() as f64 / k;
    let outside = counts.iter().map(|c| c.1).sum::<usize>() as f64 / k;
    inside > outside
}

/// `Σ_{v∈C} |N(v) ∩ C| > Σ_{v∈C} |N(v) \ C|`.
pub fn is_community(graph: &Graph, members: &[usize]) -> bool {
    let (mask, _) = inside_outside(graph, members);
    let (mut inside, mut outside) = (0usize, 0usize);
    for &v in members {
        for &u in graph.neighbors(v) {
            if mask[u as usize] {
                inside += 1;
            } else {
                outside += 1;
            }
        }
    }
    !members.is_empty() && inside > outside
}

/// Probability that a random outlier outranks a random regular node, ties
/// counting one half (Mann-Whitney U / (n_out * n_reg)).
///
/// With `higher_is_outlier == false` low scores indicate outliers.
pub fn auc(scores: &[f64], is_outlier: &[bool], higher_is_outlier: bool) -> Result<f64> {
    if scores.len() != is_outlier.len() {
        return Err(Error::InvalidParameter(
            "scores and labels differ in length",
        ));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::InvalidParameter("AUC scores must not be NaN"));
    }
    let outliers = is_outlier.iter().filter(|&&o| o).count();
    let regular = scores.len() - outliers;
    if outliers == 0 || regular == 0 {
        return Err(Error::DegenerateClasses { outliers, regular });
    }
    let sign = if higher_is_outlier { 1.0 } else { -1.0 };
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_unstable_by(|&a, &b| (sign * scores[a]).total_cmp(&(sign * scores[b])));
    // sum of 1-based ranks of outliers, ties get their average rank
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg_rank = (i + j) as f64 / 2.0 + 1.0;
        let tied_outliers = order[i..=j].iter().filter(|&&k| is_outlier[k]).count();
        rank_sum += avg_rank * tied_outliers as f64;
        i = j + 1;
    }
    let (o, r) = (outliers as f64, regular as f64);
    Ok((rank_sum - o * (o + 1.0) / 2.0) / (o * r))
}

/// [`auc`] over the nodes whose score is defined.
pub fn auc_defined(
    scores: &[Option<f64>],
    is_outlier: &[bool],
    higher_is_outlier: bool,
) -> Result<f64> {
    let (s, o): (Vec<f64>, Vec<bool>) = scores
        .iter()
        .zip(is_outlier)
        .filter_map(|(s, &o)| s.map(|s| (s, o)))
        .unzip();
    auc(&s, &o, higher_is_outlier)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DegreeBin {
    Low,
    Medium,
    High,
}

impl DegreeBin {
    pub const ALL: [DegreeBin; 3] = [DegreeBin::Low, DegreeBin::Medium, DegreeBin::High];

    pub fn name(self) -> &'static str {
        match self {
            DegreeBin::Low => "low",
            DegreeBin::Medium => "medium",
            DegreeBin::High => "high",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.name() == name)
    }
}

/// Degree thresholds: `deg <= low_max` is low, `deg <= medium_max` medium.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeBins {
    pub low_max: usize,
    pub medium_max: usize,
}

impl Default for DegreeBins {
    fn default() -> Self {
        Self {
            low_max: 7,
            medium_max: 20,
        }
    }
}

impl DegreeBins {
    pub fn classify(&self, degree: usize) -> DegreeBin {
        if degree <= self.low_max {
            DegreeBin::Low
        } else if degree <= self.medium_max {
            DegreeBin::Medium
        } else {
            DegreeBin::High
        }
    }
}

pub fn degree_bins(graph: &Graph, bins: &DegreeBins) -> Vec<DegreeBin> {
    (0..graph.node_count())
        .map(|v| bins.classify(graph.degree(v)))
        .collect()
}

/// The outlier scores carried by a [`ScoreReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScoreKind {
    Participation,
    EcgCoefficient,
    AssociationStrength,
    Entropy,
}

impl ScoreKind {
    pub const ALL: [ScoreKind; 4] = [
        ScoreKind::Participation,
        ScoreKind::EcgCoefficient,
        ScoreKind::AssociationStrength,
        ScoreKind::Entropy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScoreKind::Participation => "participation",
            ScoreKind::EcgCoefficient => "ecg_coef",
            ScoreKind::AssociationStrength => "assoc_strength",
            ScoreKind::Entropy => "entropy",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Whether large values point to outliers.
    pub fn higher_is_outlier(self) -> bool {
        matches!(self, ScoreKind::Participation | ScoreKind::Entropy)
    }
}

/// Scores of one node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeScores {
    pub degree: usize,
    pub bin: DegreeBin,
    pub is_outlier: bool,
    pub participation: Option<f64>,
    pub ecg_coef: Option<f64>,
    pub assoc_strength: Option<f64>,
    pub entropy: Option<f64>,
}

impl NodeScores {
    pub fn get(&self, kind: ScoreKind) -> Option<f64> {
        match kind {
            ScoreKind::Participation => self.participation,
            ScoreKind::EcgCoefficient => self.ecg_coef,
            ScoreKind::AssociationStrength => self.assoc_strength,
            ScoreKind::Entropy => self.entropy,
        }
    }
}

/// Mean and standard deviation of a score within one class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassStats {
    pub count: usize,
    pub mean: f64,
    pub stdev: f64,
}

impl ClassStats {
    pub fn of(values: impl Iterator<Item = f64>) -> Self {
        let (mut count, mut sum, mut sq) = (0usize, 0.0, 0.0);
        for x in values {
            count += 1;
            sum += x;
            sq += x * x;
        }
        if count == 0 {
            return Self {
                count,
                mean: f64::NAN,
                stdev: f64::NAN,
            };
        }
        let mean = sum / count as f64;
        let var = if count > 1 {
            ((sq - count as f64 * mean * mean) / (count - 1) as f64).max(0.0)
        } else {
            0.0
        };
        Self {
            count,
            mean,
            stdev: libm::sqrt(var),
        }
    }
}

/// Separation of one score on one degree bin (or all nodes).
#[derive(Debug, Clone, PartialEq)]
pub struct AucCell {
    pub score: ScoreKind,
    /// `None` means all nodes.
    pub bin: Option<DegreeBin>,
    pub outliers: ClassStats,
    pub regular: ClassStats,
    /// `None` when one class is empty.
    pub auc: Option<f64>,
}

/// Per-node scores and AUC summaries.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub nodes: Vec<NodeScores>,
}

impl ScoreReport {
    /// Scores every node against `partition`. Entropy uses the neighbor
    /// community distribution.
    pub fn compute(
        graph: &Graph,
        partition: &Partition,
        ecg_coefficients: &[Option<f64>],
        is_outlier: &[bool],
        bins: &DegreeBins,
    ) -> Result<Self> {
        let n = graph.node_count();
        partition.check_for(graph)?;
        if ecg_coefficients.len() != n || is_outlier.len() != n {
            return Err(Error::InvalidParameter(
                "per-node inputs must cover every node",
            ));
        }
        let participation = participation(graph, partition);
        let assoc = association_strength(graph, partition);
        let entropy = neighbor_entropy(graph, partition);
        let nodes = (0..n)
            .map(|v| NodeScores {
                degree: graph.degree(v),
                bin: bins.classify(graph.degree(v)),
                is_outlier: is_outlier[v],
                participation: participation[v],
                ecg_coef: ecg_coefficients[v],
                assoc_strength: assoc[v],
                entropy: entropy[v],
            })
            .collect();
        Ok(Self { nodes })
    }

    pub fn cell(&self, score: ScoreKind, bin: Option<DegreeBin>) -> AucCell {
        let selected: Vec<(f64, bool)> = self
            .nodes
            .iter()
            .filter(|n| bin.is_none_or(|b| n.bin == b))
            .filter_map(|n| n.get(score).map(|s| (s, n.is_outlier)))
            .collect();
        let (values, flags): (Vec<f64>, Vec<bool>) = selected.iter().copied().unzip();
        AucCell {
            score,
            bin,
            outliers: ClassStats::of(selected.iter().filter(|s| s.1).map(|s| s.0)),
            regular: ClassStats::of(selected.iter().filter(|s| !s.1).map(|s| s.0)),
            auc: auc(&values, &flags, score.higher_is_outlier()).ok(),
        }
    }

    /// Every score on all nodes and on each degree bin.
    pub fn auc_table(&self) -> Vec<AucCell> {
        let mut out = Vec::new();
        for score in ScoreKind::ALL {
            out.push(self.cell(score, None));
            for bin in DegreeBin::ALL {
                out.push(self.cell(score, Some(bin)));
            }
        }
        out
    }
}
