//! Simple undirected graphs in compressed adjacency form, and partitions.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Simple undirected graph on nodes `0..n`.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted. The adjacency
/// of every node is sorted and remembers which edge each slot came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    edges: Vec<(u32, u32)>,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    edge_ids: Vec<u32>,
}

impl Graph {
    /// Builds a graph, discarding self-loops and repeated edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut list: Vec<(u32, u32)> = Vec::new();
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidParameter(
                    "edge endpoint outside the node range",
                ));
            }
            if u != v {
                list.push((u.min(v), u.max(v)));
            }
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_sorted_simple(n, list))
    }

    fn from_sorted_simple(n: usize, edges: Vec<(u32, u32)>) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in &edges {
            offsets[u as usize + 1] += 1;
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0u32; 2 * edges.len()];
        let mut edge_ids = vec![0u32; 2 * edges.len()];
        // edges are sorted by (u, v), so each adjacency list comes out sorted
        for (id, &(u, v)) in edges.iter().enumerate() {
            let slot = &mut cursor[v as usize];
            neighbors[*slot] = u;
            edge_ids[*slot] = id as u32;
            *slot += 1;
        }
        for (id, &(u, v)) in edges.iter().enumerate() {
            let slot = &mut cursor[u as usize];
            neighbors[*slot] = v;
            edge_ids[*slot] = id as u32;
            *slot += 1;
        }
        Self {
            edges,
            offsets,
            neighbors,
            edge_ids,
        }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|v| self.degree(v)).collect()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Neighbors of `v` paired with the id of the connecting edge.
    pub fn incident(&self, v: usize) -> impl Iterator<Item = (u32, usize)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.neighbors[range.clone()]
            .iter()
            .copied()
            .zip(self.edge_ids[range].iter().map(|&e| e as usize))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Sum of degrees.
    pub fn volume(&self) -> usize {
        2 * self.edges.len()
    }

    /// Subgraph induced by `keep`, relabeled to `0..kept` in node order.
    /// Returns the graph and the original id of every kept node.
    pub fn induced(&self, keep: &[bool]) -> (Graph, Vec<usize>) {
        let mut new_id = vec![u32::MAX; self.node_count()];
        let mut original = Vec::new();
        for (v, _) in keep.iter().enumerate().filter(|(_, &k)| k) {
            new_id[v] = original.len() as u32;
            original.push(v);
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| keep[u as usize] && keep[v as usize])
            .map(|&(u, v)| (new_id[u as usize], new_id[v as usize]))
            .collect();
        (Self::from_sorted_simple(original.len(), edges), original)
    }
}

/// Assignment of every node to one of `count` parts, labeled `0..count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<u32>,
    count: usize,
}

impl Partition {
    /// Wraps labels that already use every id in `0..count`.
    pub fn new(labels: Vec<u32>) -> Result<Self> {
        let count = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
        let mut used = vec![false; count];
        for &l in &labels {
            used[l as usize] = true;
        }
        if used.iter().any(|u| !u) {
            return Err(Error::InvalidPartition);
        }
        Ok(Self { labels, count })
    }

    /// Relabels arbitrary ids to `0..count`, keeping their relative order.
    pub fn from_raw(raw: &[u32]) -> Self {
        let mut distinct: Vec<u32> = raw.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let labels = raw
            .iter()
            .map(|l| distinct.binary_search(l).expect("present") as u32)
            .collect();
        Self {
            labels,
            count: distinct.len(),
        }
    }

    /// Every node in its own part.
    pub fn singletons(n: usize) -> Self {
        Self {
            labels: (0..n as u32).collect(),
            count: n,
        }
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v] as usize
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of parts.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }

    /// `vol(A_i)` for every part.
    pub fn volumes(&self, graph: &Graph) -> Vec<usize> {
        let mut vol = vec![0; self.count];
        for v in 0..graph.node_count() {
            vol[self.label(v)] += graph.degree(v);
        }
        vol
    }

    /// `e(A_i)`: edges with both endpoints in part `i`.
    pub fn internal_edges(&self, graph: &Graph) -> Vec<usize> {
        let mut e = vec![0; self.count];
        for &(u, v) in graph.edges() {
            let (a, b) = (self.label(u as usize), self.label(v as usize));
            if a == b {
                e[a] += 1;
            }
        }
        e
    }

    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (v, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(v);
        }
        out
    }

    pub(crate) fn check_for(&self, graph: &Graph) -> Result<()> {
        if self.labels.len() == graph.node_count() {
            Ok(())
        } else {
            Err(Error::InvalidPartition)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_input_edges() {
        let g = Graph::from_edges(4, [(1, 0), (0, 1), (2, 2), (3, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 3)]);
        assert_eq!(g.neighbors(1), &[0, 3]);
        assert_eq!(g.degree(2), 0);
        assert!(g.has_edge(3, 1));
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn incident_edge_ids_match_edges() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        for v in 0..4 {
            for (u, e) in g.incident(v) {
                let (a, b) = g.edges()[e];
                assert!((a as usize, b) == (v, u) || (b as usize, a) == (v, u));
            }
        }
    }

    #[test]
    fn partition_relabel_and_stats() {
        let p = Partition::from_raw(&[7, 3, 7, 9]);
        assert_eq!(p.labels(), &[1, 0, 1, 2]);
        assert_eq!(p.count(), 3);
        assert!(Partition::new(vec![0, 2]).is_err());
        let g = Graph::from_edges(4, [(0, 2), (0, 1), (2, 3)]).unwrap();
        assert_eq!(p.volumes(&g), vec![1, 4, 1]);
        assert_eq!(p.internal_edges(&g), vec![0, 1, 0]);
    }

    #[test]
    fn induced_subgraph() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let (h, map) = g.induced(&[false, true, true, true]);
        assert_eq!(map, vec![1, 2, 3]);
        assert_eq!(h.edges(), &[(0, 1), (1, 2)]);
    }
}
