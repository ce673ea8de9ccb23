//! Classical node centralities.
//!
//! Closeness and betweenness decompose into per-source passes
//! ([`closeness_of`], [`betweenness_partial`]) so callers can spread sources
//! over threads and add the partial vectors in a fixed order.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::graph::Graph;
use crate::{Error, Result};

/// Stopping rule for the iterative centralities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Iteration {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for Iteration {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 10_000,
        }
    }
}

fn bfs_distances(graph: &Graph, source: usize, dist: &mut [u32], queue: &mut VecDeque<usize>) {
    dist.fill(u32::MAX);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        for &u in graph.neighbors(v) {
            let u = u as usize;
            if dist[u] == u32::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
}

/// Closeness of `v`: `(r-1)/Σd` over the `r` reachable nodes, scaled by
/// `(r-1)/(n-1)`. Isolated nodes score 0.
pub fn closeness_of(graph: &Graph, v: usize) -> f64 {
    let mut dist = vec![0u32; graph.node_count()];
    closeness_with(graph, v, &mut dist, &mut VecDeque::new())
}

fn closeness_with(graph: &Graph, v: usize, dist: &mut [u32], queue: &mut VecDeque<usize>) -> f64 {
    let n = graph.node_count();
    bfs_distances(graph, v, dist, queue);
    let (mut reached, mut total) = (0usize, 0u64);
    for &d in dist.iter().filter(|&&d| d != u32::MAX) {
        reached += 1;
        total += d as u64;
    }
    if reached <= 1 {
        return 0.0;
    }
    let r = (reached - 1) as f64;
    (r / total as f64) * (r / (n - 1) as f64)
}

pub fn closeness(graph: &Graph) -> Vec<f64> {
    let mut dist = vec![0u32; graph.node_count()];
    let mut queue = VecDeque::new();
    (0..graph.node_count())
        .map(|v| closeness_with(graph, v, &mut dist, &mut queue))
        .collect()
}

/// Principal eigenvector of the adjacency matrix scaled to max 1.
///
/// Iterates on `A + I`, which has the same leading eigenvector and avoids
/// oscillation on bipartite graphs.
pub fn eigencentrality(graph: &Graph, iteration: Iteration) -> Result<Vec<f64>> {
    if graph.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let n = graph.node_count();
    let mut x = vec![1.0; n];
    let mut next = vec![0.0; n];
    for _ in 0..iteration.max_iter {
        for v in 0..n {
            next[v] = x[v]
                + graph
                    .neighbors(v)
                    .iter()
                    .map(|&u| x[u as usize])
                    .sum::<f64>();
        }
        let top = next.iter().copied().fold(0.0, f64::max);
        let mut delta: f64 = 0.0;
        for v in 0..n {
            next[v] /= top;
            delta = delta.max((next[v] - x[v]).abs());
        }
        core::mem::swap(&mut x, &mut next);
        if delta < iteration.tol {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence {
        iterations: iteration.max_iter,
    })
}

/// Random-walk PageRank with uniform teleport; dangling mass is spread
/// uniformly. Stops once `‖x' - x‖₁ < tol`.
pub fn pagerank(graph: &Graph, damping: f64, iteration: Iteration) -> Result<Vec<f64>> {
    if !(0.0..1.0).contains(&damping) {
        return Err(Error::InvalidParameter("damping must lie in [0, 1)"));
    }
    let n = graph.node_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    let uniform = 1.0 / n as f64;
    let mut x = vec![uniform; n];
    let mut next = vec![0.0; n];
    for _ in 0..iteration.max_iter {
        step_pagerank(graph, damping, &x, &mut next);
        let residual: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        core::mem::swap(&mut x, &mut next);
        if residual < iteration.tol {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence {
        iterations: iteration.max_iter,
    })
}

fn step_pagerank(graph: &Graph, damping: f64, x: &[f64], out: &mut [f64]) {
    let n = graph.node_count();
    let dangling: f64 = (0..n).filter(|&v| graph.degree(v) == 0).map(|v| x[v]).sum();
    let base = (1.0 - damping + damping * dangling) / n as f64;
    for (v, o) in out.iter_mut().enumerate() {
        let flow: f64 = graph
            .neighbors(v)
            .iter()
            .map(|&u| x[u as usize] / graph.degree(u as usize) as f64)
            .sum();
        *o = base + damping * flow;
    }
}

/// Brandes accumulation over `sources`; summing the partial vectors of a
/// cover of `0..n` gives [`betweenness`].
pub fn betweenness_partial(graph: &Graph, sources: Range<usize>) -> Vec<f64> {
    let n = graph.node_count();
    let mut score = vec![0.0; n];
    let mut dist = vec![u32::MAX; n];
    let mut sigma = vec![0.0f64; n];
    let mut delta = vec![0.0f64; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    for s in sources {
        dist.fill(u32::MAX);
        sigma.fill(0.0);
        delta.fill(0.0);
        order.clear();
        dist[s] = 0;
        sigma[s] = 1.0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &u in graph.neighbors(v) {
                let u = u as usize;
                if dist[u] == u32::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
                if dist[u] == dist[v] + 1 {
                    sigma[u] += sigma[v];
                }
            }
        }
        for &w in order.iter().rev() {
            for &v in graph.neighbors(w) {
                let v = v as usize;
                if dist[v] != u32::MAX && dist[v] + 1 == dist[w] {
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                }
            }
            if w != s {
                score[w] += delta[w];
            }
        }
    }
    score
}

/// Sum over unordered pairs `{s, t}` of the fraction of shortest s-t paths
/// through each node.
pub fn betweenness(graph: &Graph) -> Vec<f64> {
    let mut b = betweenness_partial(graph, 0..graph.node_count());
    halve(&mut b);
    b
}

/// Turns summed ordered-pair partials into unordered pair counts.
pub fn halve(partials: &mut [f64]) {
    for x in partials {
        *x /= 2.0;
    }
}

/// Divides raw betweenness by the pair count `(n-1)(n-2)/2`.
pub fn normalize_betweenness(raw: &[f64]) -> Vec<f64> {
    let n = raw.len();
    if n < 3 {
        return vec![0.0; n];
    }
    let pairs = ((n - 1) * (n - 2)) as f64 / 2.0;
    raw.iter().map(|b| b / pairs).collect()
}
