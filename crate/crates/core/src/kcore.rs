//! k-core reduction.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::Graph;

/// Nodes of the k-core: repeatedly drop every node with fewer than `k`
/// remaining neighbors.
pub fn k_core_mask(graph: &Graph, k: usize) -> Vec<bool> {
    let n = graph.node_count();
    let mut degree = graph.degrees();
    let mut alive = vec![true; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| degree[v] < k).collect();
    for &v in &stack {
        alive[v] = false;
    }
    while let Some(v) = stack.pop() {
        for &u in graph.neighbors(v) {
            let u = u as usize;
            if alive[u] {
                degree[u] -= 1;
                if degree[u] < k {
                    alive[u] = false;
                    stack.push(u);
                }
            }
        }
    }
    alive
}

/// The k-core as a subgraph, with the original id of each kept node.
pub fn k_core(graph: &Graph, k: usize) -> (Graph, Vec<usize>) {
    graph.induced(&k_core_mask(graph, k))
}
