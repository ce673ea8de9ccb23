//! Modularity, Louvain and Ensemble Clustering for Graphs (ECG).

use alloc::vec;
use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::{Rng, RngCore};

use crate::graph::{Graph, Partition};
use crate::rng;
use crate::{Error, Result};

/// Gains closer than this are treated as ties.
const GAIN_EPS: f64 = 1e-10;

/// The two terms of modularity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModularityParts {
    /// Share of edge weight inside parts.
    pub edge_contribution: f64,
    /// Expected share under the degree-preserving null model.
    pub degree_tax: f64,
}

impl ModularityParts {
    pub fn modularity(&self) -> f64 {
        self.edge_contribution - self.degree_tax
    }
}

/// Edge contribution and degree tax of `partition`.
pub fn modularity_parts(graph: &Graph, partition: &Partition) -> Result<ModularityParts> {
    weighted_modularity_parts(graph, None, partition)
}

/// `q = Σ e(A)/|E| - Σ (vol(A)/vol(V))^2`.
pub fn modularity(graph: &Graph, partition: &Partition) -> Result<f64> {
    modularity_parts(graph, partition).map(|p| p.modularity())
}

/// Modularity with per-edge weights (indexed like `graph.edges()`);
/// volumes become weighted strengths.
pub fn weighted_modularity_parts(
    graph: &Graph,
    weights: Option<&[f64]>,
    partition: &Partition,
) -> Result<ModularityParts> {
    partition.check_for(graph)?;
    if graph.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let weight = |e: usize| weights.map_or(1.0, |w| w[e]);
    let mut inside = vec![0.0; partition.count()];
    let mut volume = vec![0.0; partition.count()];
    let mut total = 0.0;
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        let w = weight(e);
        let (a, b) = (partition.label(u as usize), partition.label(v as usize));
        if a == b {
            inside[a] += w;
        }
        volume[a] += w;
        volume[b] += w;
        total += w;
    }
    Ok(ModularityParts {
        edge_contribution: inside.iter().sum::<f64>() / total,
        degree_tax: volume
            .iter()
            .map(|v| {
                let s = v / (2.0 * total);
                s * s
            })
            .sum(),
    })
}

/// Weighted graph with self-loops, used across Louvain levels.
struct LevelGraph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    weights: Vec<f64>,
    /// Weight of each node's self-loop (internal edges of an aggregate).
    loops: Vec<f64>,
    /// Weighted degree, self-loops counted twice.
    strength: Vec<f64>,
    /// Sum of strengths, i.e. twice the total edge weight.
    total: f64,
}

impl LevelGraph {
    fn from_graph(graph: &Graph, weights: Option<&[f64]>) -> Self {
        let n = graph.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::with_capacity(graph.volume());
        let mut ws = Vec::with_capacity(graph.volume());
        offsets.push(0);
        for v in 0..n {
            for (u, e) in graph.incident(v) {
                neighbors.push(u);
                ws.push(weights.map_or(1.0, |w| w[e]));
            }
            offsets.push(neighbors.len());
        }
        let strength: Vec<f64> = (0..n)
            .map(|v| ws[offsets[v]..offsets[v + 1]].iter().sum())
            .collect();
        let total = strength.iter().sum();
        Self {
            offsets,
            neighbors,
            weights: ws,
            loops: vec![0.0; n],
            strength,
            total,
        }
    }

    fn node_count(&self) -> usize {
        self.strength.len()
    }

    fn adjacent(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[v]..self.offsets[v + 1];
        self.neighbors[r.clone()]
            .iter()
            .map(|&u| u as usize)
            .zip(self.weights[r].iter().copied())
    }

    /// Collapses every community of `comm` (labels `0..count`) to one node.
    fn aggregate(&self, comm: &[u32], count: usize) -> Self {
        let mut loops = vec![0.0; count];
        let mut strength = vec![0.0; count];
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (v, &c) in comm.iter().enumerate() {
            let c = c as usize;
            loops[c] += self.loops[v];
            strength[c] += self.strength[v];
            members[c].push(v);
        }
        let mut offsets = Vec::with_capacity(count + 1);
        let mut neighbors = Vec::new();
        let mut weights = Vec::new();
        let mut link = vec![0.0; count];
        let mut touched: Vec<usize> = Vec::new();
        offsets.push(0);
        for (c, nodes) in members.iter().enumerate() {
            for &v in nodes {
                for (u, w) in self.adjacent(v) {
                    let d = comm[u] as usize;
                    if d == c {
                        // each internal edge is seen from both ends
                        loops[c] += w / 2.0;
                    } else {
                        if link[d] == 0.0 {
                            touched.push(d);
                        }
                        link[d] += w;
                    }
                }
            }
            touched.sort_unstable();
            for &d in &touched {
                neighbors.push(d as u32);
                weights.push(link[d]);
                link[d] = 0.0;
            }
            touched.clear();
            offsets.push(neighbors.len());
        }
        Self {
            offsets,
            neighbors,
            weights,
            loops,
            strength,
            total: self.total,
        }
    }
}

/// Repeated local moving until a full sweep moves nothing. Returns whether
/// any node changed community.
fn local_moving(g: &LevelGraph, comm: &mut [u32], order: &[u32]) -> bool {
    let n = g.node_count();
    let mut tot = vec![0.0; n];
    for v in 0..n {
        tot[comm[v] as usize] += g.strength[v];
    }
    let mut link = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut any = false;
    loop {
        let mut moved = false;
        for &v in order {
            let v = v as usize;
            let k = g.strength[v];
            if k == 0.0 {
                continue;
            }
            let current = comm[v] as usize;
            for (u, w) in g.adjacent(v) {
                let c = comm[u] as usize;
                if link[c] == 0.0 {
                    touched.push(c);
                }
                link[c] += w;
            }
            tot[current] -= k;
            let gain = |c: usize, link: &[f64]| link[c] - tot[c] * k / g.total;
            let stay = gain(current, &link);
            let best_gain = touched.iter().map(|&c| gain(c, &link)).fold(stay, f64::max);
            let mut target = current;
            if best_gain > stay + GAIN_EPS {
                target = touched
                    .iter()
                    .copied()
                    .filter(|&c| gain(c, &link) >= best_gain - GAIN_EPS)
                    .min()
                    .expect("best candidate exists");
                let delta_q = (gain(target, &link) - stay) * 2.0 / g.total;
                debug_assert!(delta_q > 0.0, "accepted move must raise modularity");
            }
            tot[target] += k;
            for &c in &touched {
                link[c] = 0.0;
            }
            touched.clear();
            if target != current {
                comm[v] = target as u32;
                moved = true;
            }
        }
        if !moved {
            return any;
        }
        any = true;
    }
}

/// Renumbers labels to `0..count` by first appearance. Returns the count.
fn compact(labels: &mut [u32]) -> usize {
    let mut map = vec![u32::MAX; labels.len()];
    let mut next = 0u32;
    for l in labels.iter_mut() {
        let slot = &mut map[*l as usize];
        if *slot == u32::MAX {
            *slot = next;
            next += 1;
        }
        *l = *slot;
    }
    next as usize
}

fn shuffled_order<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<u32> {
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    order
}

/// Multi-level Louvain modularity optimization.
///
/// `edge_weights`, when given, are indexed like `graph.edges()`. Nodes are
/// visited in a random order drawn from `rng`; ties between target
/// communities keep the current one, else the lowest label wins. Isolated
/// nodes stay singletons.
pub fn louvain<R: Rng + ?Sized>(
    graph: &Graph,
    edge_weights: Option<&[f64]>,
    rng: &mut R,
) -> Partition {
    let n = graph.node_count();
    let mut labels: Vec<u32> = (0..n as u32).collect();
    let mut level = LevelGraph::from_graph(graph, edge_weights);
    if level.total == 0.0 {
        return Partition::singletons(n);
    }
    loop {
        let m = level.node_count();
        let mut comm: Vec<u32> = (0..m as u32).collect();
        let order = shuffled_order(m, rng);
        if !local_moving(&level, &mut comm, &order) {
            break;
        }
        let count = compact(&mut comm);
        for l in labels.iter_mut() {
            *l = comm[*l as usize];
        }
        level = level.aggregate(&comm, count);
    }
    compact(&mut labels);
    Partition::new(labels).expect("compact labels")
}

/// One level of Louvain local moving on the original graph, no coarsening.
pub fn louvain_level1<R: Rng + ?Sized>(graph: &Graph, rng: &mut R) -> Partition {
    let n = graph.node_count();
    let level = LevelGraph::from_graph(graph, None);
    let mut comm: Vec<u32> = (0..n as u32).collect();
    if level.total > 0.0 {
        let order = shuffled_order(n, rng);
        local_moving(&level, &mut comm, &order);
    }
    compact(&mut comm);
    Partition::new(comm).expect("compact labels")
}

/// ECG settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcgConfig {
    /// Number of level-1 partitions in the ensemble.
    pub ensemble_size: usize,
    /// Lower bound on every edge score.
    pub min_weight: f64,
}

impl Default for EcgConfig {
    fn default() -> Self {
        Self {
            ensemble_size: 16,
            min_weight: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EcgResult {
    /// Share of ensemble partitions co-clustering each edge's endpoints,
    /// floored at the minimum weight. Indexed like `graph.edges()`.
    pub edge_scores: Vec<f64>,
    /// Mean score of the edges at each node; `None` for isolated nodes.
    pub node_coefficients: Vec<Option<f64>>,
    /// Louvain partition of the score-weighted graph.
    pub partition: Partition,
}

/// Runs the ECG ensemble and its final weighted Louvain pass.
///
/// Ensemble member `i` draws from stream `i` of a seed taken from `rng`,
/// and votes are summed, so the result does not depend on member order.
pub fn ecg<R: RngCore + ?Sized>(
    graph: &Graph,
    config: &EcgConfig,
    rng: &mut R,
) -> Result<EcgResult> {
    if config.ensemble_size == 0 {
        return Err(Error::InvalidParameter(
            "ECG ensemble size must be at least 1",
        ));
    }
    if !(0.0..=1.0).contains(&config.min_weight) {
        return Err(Error::InvalidParameter(
            "ECG minimum weight must lie in [0, 1]",
        ));
    }
    let base = rng.next_u64();
    let mut votes = vec![0u32; graph.edge_count()];
    for member in 0..config.ensemble_size {
        let p = louvain_level1(graph, &mut rng::stream(base, member as u64));
        for (e, &(u, v)) in graph.edges().iter().enumerate() {
            if p.label(u as usize) == p.label(v as usize) {
                votes[e] += 1;
            }
        }
    }
    let k = config.ensemble_size as f64;
    let edge_scores: Vec<f64> = votes
        .iter()
        .map(|&c| (c as f64 / k).max(config.min_weight))
        .collect();
    let node_coefficients = (0..graph.node_count())
        .map(|v| {
            let d = graph.degree(v);
            (d > 0).then(|| graph.incident(v).map(|(_, e)| edge_scores[e]).sum::<f64>() / d as f64)
        })
        .collect();
    let partition = louvain(graph, Some(&edge_scores), &mut rng::stream(base, u64::MAX));
    Ok(EcgResult {
        edge_scores,
        node_coefficients,
        partition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn two_triangles() -> Graph {
        Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    fn clique(n: u32, offset: u32) -> Vec<(u32, u32)> {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((offset + i, offset + j));
            }
        }
        e
    }

    /// Every set partition of `0..n` as restricted growth strings.
    fn all_partitions(n: usize) -> Vec<Vec<u32>> {
        fn rec(prefix: &mut Vec<u32>, n: usize, out: &mut Vec<Vec<u32>>) {
            if prefix.len() == n {
                out.push(prefix.clone());
                return;
            }
            let next = prefix.iter().copied().max().map_or(0, |m| m + 1);
            for l in 0..=next {
                prefix.push(l);
                rec(prefix, n, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), n, &mut out);
        out
    }

    fn best_by_exhaustion(g: &Graph) -> (f64, Vec<u32>) {
        all_partitions(g.node_count())
            .into_iter()
            .map(|l| {
                (
                    modularity(g, &Partition::new(l.clone()).unwrap()).unwrap(),
                    l,
                )
            })
            .fold((f64::MIN, Vec::new()), |a, b| {
                if b.0 > a.0 + 1e-12 {
                    b
                } else {
                    a
                }
            })
    }

    #[test]
    fn modularity_hand_cases() {
        let g = two_triangles();
        let single = Partition::new(vec![0; 6]).unwrap();
        assert!(modularity(&g, &single).unwrap().abs() < 1e-12);
        let split = Partition::new(vec![0, 0, 0, 1, 1, 1]).unwrap();
        assert!((modularity(&g, &split).unwrap() - 0.5).abs() < 1e-12);
        let empty = Graph::from_edges(3, []).unwrap();
        assert_eq!(
            modularity(&empty, &Partition::singletons(3)),
            Err(Error::EmptyGraph)
        );
    }

    #[test]
    fn louvain_finds_triangles() {
        let g = two_triangles();
        let (best_q, best) = best_by_exhaustion(&g);
        assert!((best_q - 0.5).abs() < 1e-12);
        for seed in 0..20 {
            let p = louvain(&g, None, &mut rng::stream(seed, 0));
            assert_eq!(Partition::from_raw(p.labels()), Partition::from_raw(&best));
            let p1 = louvain_level1(&g, &mut rng::stream(seed, 0));
            assert_eq!(p1.count(), 2);
            assert_eq!(p1.label(0), p1.label(2));
            assert_ne!(p1.label(0), p1.label(3));
        }
    }

    #[test]
    fn louvain_keeps_clique_whole() {
        let g = Graph::from_edges(4, clique(4, 0)).unwrap();
        let (best_q, best) = best_by_exhaustion(&g);
        assert_eq!(best, vec![0, 0, 0, 0]);
        for seed in 0..20 {
            let p = louvain(&g, None, &mut rng::stream(seed, 0));
            assert_eq!(p.count(), 1);
            assert!((modularity(&g, &p).unwrap() - best_q).abs() < 1e-12);
        }
    }

    #[test]
    fn edgeless_graph_stays_singletons() {
        let g = Graph::from_edges(5, []).unwrap();
        assert_eq!(
            louvain(&g, None, &mut rng::stream(0, 0)),
            Partition::singletons(5)
        );
        assert_eq!(
            louvain_level1(&g, &mut rng::stream(0, 0)),
            Partition::singletons(5)
        );
    }

    #[test]
    fn single_edge_merges() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let apart = modularity(&g, &Partition::singletons(2)).unwrap();
        let together = modularity(&g, &Partition::new(vec![0, 0]).unwrap()).unwrap();
        assert!(together > apart);
        let p = louvain_level1(&g, &mut rng::stream(0, 0));
        assert_eq!(p.labels(), &[0, 0]);
    }

    #[test]
    fn louvain_matches_exhaustive_optimum_on_small_graphs() {
        // ring of four triangles joined by single edges
        let mut edges = Vec::new();
        for t in 0..4u32 {
            edges.extend(clique(3, 3 * t));
            edges.push((3 * t + 2, (3 * t + 3) % 12));
        }
        let g = Graph::from_edges(12, edges).unwrap();
        let p = louvain(&g, None, &mut rng::stream(9, 0));
        assert_eq!(p.count(), 4);
        let q = modularity(&g, &p).unwrap();
        // each triangle: e = 3/16, vol = 8/32
        assert!((q - (12.0 / 16.0 - 4.0 / 16.0)).abs() < 1e-12);
    }

    #[test]
    fn weighted_louvain_respects_weights() {
        // path 0-1-2-3 with a weak middle edge
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let w = [1.0, 0.05, 1.0];
        let p = louvain(&g, Some(&w), &mut rng::stream(0, 0));
        assert_eq!(p.labels(), &[0, 0, 1, 1]);
    }

    #[test]
    fn ecg_on_clique() {
        let g = Graph::from_edges(6, clique(6, 0)).unwrap();
        let r = ecg(&g, &EcgConfig::default(), &mut rng::stream(0, 0)).unwrap();
        assert!(r.edge_scores.iter().all(|&s| s == 1.0));
        assert!(r.node_coefficients.iter().all(|&c| c == Some(1.0)));
        assert_eq!(r.partition.count(), 1);
    }

    #[test]
    fn ecg_bridge_node_has_lowest_coefficient() {
        let mut edges = clique(5, 0);
        edges.extend(clique(5, 5));
        for t in [0, 1, 5, 6] {
            edges.push((10, t));
        }
        let g = Graph::from_edges(11, edges).unwrap();
        let cfg = EcgConfig {
            ensemble_size: 32,
            ..EcgConfig::default()
        };
        let r = ecg(&g, &cfg, &mut rng::stream(1, 0)).unwrap();
        let coef: Vec<f64> = r.node_coefficients.iter().map(|c| c.unwrap()).collect();
        let bridge = coef[10];
        assert!(coef[..10].iter().all(|&c| c > bridge), "{coef:?}");
        for (v, &c) in coef.iter().enumerate() {
            let direct: f64 =
                g.incident(v).map(|(_, e)| r.edge_scores[e]).sum::<f64>() / g.degree(v) as f64;
            assert!((direct - c).abs() < 1e-15);
        }
        assert!(r
            .edge_scores
            .iter()
            .all(|&s| (cfg.min_weight..=1.0).contains(&s)));
    }

    #[test]
    fn ecg_rejects_empty_ensemble() {
        let g = two_triangles();
        let cfg = EcgConfig {
            ensemble_size: 0,
            ..EcgConfig::default()
        };
        assert!(ecg(&g, &cfg, &mut rng::stream(0, 0)).is_err());
    }

    proptest::proptest! {
        #[test]
        fn modularity_bounded(
            edges in proptest::collection::vec((0u32..12, 0u32..12), 1..40),
            labels in proptest::collection::vec(0u32..4, 12),
        ) {
            let g = Graph::from_edges(12, edges).unwrap();
            proptest::prop_assume!(g.edge_count() > 0);
            let q = modularity(&g, &Partition::from_raw(&labels)).unwrap();
            proptest::prop_assert!((-1.0..1.0).contains(&q));
        }

        #[test]
        fn clique_partition_beats_coarser(sizes in proptest::collection::vec(3u32..7, 2..5)) {
            let mut edges = Vec::new();
            let mut labels = Vec::new();
            let mut offset = 0;
            for (i, &s) in sizes.iter().enumerate() {
                edges.extend(clique(s, offset));
                labels.extend(core::iter::repeat_n(i as u32, s as usize));
                offset += s;
            }
            let g = Graph::from_edges(offset as usize, edges).unwrap();
            let fine = modularity(&g, &Partition::new(labels).unwrap()).unwrap();
            let coarse = modularity(&g, &Partition::new(vec![0; offset as usize]).unwrap()).unwrap();
            proptest::prop_assert!(fine >= coarse);
            let found = louvain(&g, None, &mut rng::stream(0, 0));
            proptest::prop_assert!((modularity(&g, &found).unwrap() - fine).abs() < 1e-12);
        }
    }
}
