//! Configuration-model construction of community and background graphs.
//!
//! Each community is matched on its community-degree stubs, then the
//! background graph is matched on background stubs of all nodes. Both are
//! rewired by degree-preserving two-edge swaps until simple. Collisions a
//! community cannot resolve are pushed into the background stub pool, so
//! the final degree of every node is exactly its requested degree.

use alloc::vec::Vec;
use hashbrown::{HashMap, HashSet};
use rand::seq::SliceRandom;
use rand::Rng;
use rustc_hash::FxBuildHasher;

use crate::assignment::{DegreeSplit, NodeAssignment};
use crate::generator::GeneratorParams;
use crate::graph::Graph;
use crate::rng::{self, stage};
use crate::sequences::DegreeSequence;
use crate::{Error, Result};

pub type Edge = (u32, u32);
pub type EdgeSet = HashSet<u64, FxBuildHasher>;

/// Swap passes allowed per rewiring scope.
pub const MAX_REWIRE_PASSES: usize = 100;

#[inline]
fn normalized(u: u32, v: u32) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[inline]
fn key((u, v): Edge) -> u64 {
    ((u as u64) << 32) | v as u64
}

/// Set of normalized edges, for simplicity checks against another graph.
pub fn edge_set(edges: &[Edge]) -> EdgeSet {
    let mut set = EdgeSet::with_capacity_and_hasher(edges.len(), FxBuildHasher);
    set.extend(edges.iter().map(|&(u, v)| key(normalized(u, v))));
    set
}

/// Which graph a rewiring works on.
#[derive(Clone, Copy)]
pub enum Scope<'a> {
    /// A single community; unresolved collisions are handed back.
    Community,
    /// The background graph; must also avoid every edge in `fixed`.
    Background { fixed: &'a EdgeSet },
}

/// Outcome of a rewiring.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Rewired {
    /// Simple edge set.
    pub edges: Vec<Edge>,
    /// Colliding edges removed after the pass cap (community scope only).
    pub leftovers: Vec<Edge>,
}

/// Uniform random perfect matching of `stubs`.
///
/// Each entry of `stubs` is one half-edge of the listed node; the result
/// may contain self-loops and parallel edges.
pub fn configuration_matching<R: Rng + ?Sized>(stubs: &[u32], rng: &mut R) -> Result<Vec<Edge>> {
    if stubs.len() % 2 == 1 {
        return Err(Error::OddStubCount(stubs.len()));
    }
    let mut shuffled = stubs.to_vec();
    shuffled.shuffle(rng);
    Ok(shuffled
        .chunks_exact(2)
        .map(|pair| normalized(pair[0], pair[1]))
        .collect())
}

/// Multiset bookkeeping for the swap search.
struct Collisions<'a> {
    counts: HashMap<u64, u32, FxBuildHasher>,
    fixed: Option<&'a EdgeSet>,
}

impl<'a> Collisions<'a> {
    fn new(edges: &[Edge], fixed: Option<&'a EdgeSet>) -> Self {
        let mut counts = HashMap::with_capacity_and_hasher(edges.len(), FxBuildHasher);
        for &e in edges {
            *counts.entry(key(e)).or_insert(0) += 1;
        }
        Self { counts, fixed }
    }

    fn base_cost(&self, e: Edge) -> u32 {
        (e.0 == e.1) as u32 + self.fixed.is_some_and(|f| f.contains(&key(e))) as u32
    }

    fn count(&self, e: Edge) -> u32 {
        self.counts.get(&key(e)).copied().unwrap_or(0)
    }

    /// Cost of one more copy of `e`.
    fn insert(&mut self, e: Edge) -> u32 {
        let c = self.counts.entry(key(e)).or_insert(0);
        let dup = (*c > 0) as u32;
        *c += 1;
        self.base_cost(e) + dup
    }

    /// Cost saved by dropping one copy of `e`.
    fn remove(&mut self, e: Edge) -> u32 {
        let k = key(e);
        let c = self.counts.get_mut(&k).expect("edge present");
        *c -= 1;
        let dup = (*c > 0) as u32;
        if *c == 0 {
            self.counts.remove(&k);
        }
        self.base_cost(e) + dup
    }

    fn is_bad(&self, e: Edge) -> bool {
        self.base_cost(e) > 0 || self.count(e) > 1
    }

    /// Indices of colliding edges; of several parallel copies the first
    /// one is kept as good.
    fn bad_indices(&self, edges: &[Edge]) -> Vec<usize> {
        let mut seen = EdgeSet::with_hasher(FxBuildHasher);
        let mut bad = Vec::new();
        for (i, &e) in edges.iter().enumerate() {
            if self.base_cost(e) > 0 || (self.count(e) > 1 && !seen.insert(key(e))) {
                bad.push(i);
            }
        }
        bad
    }
}

/// Rewires a multigraph into a simple graph with the same degrees.
///
/// Every pass visits each colliding edge once, pairs it with a uniformly
/// random other edge, and applies one of the two degree-preserving swaps if
/// that strictly lowers the number of collisions. After
/// [`MAX_REWIRE_PASSES`] passes, community scope removes what is left and
/// returns it as leftovers; background scope fails with
/// [`Error::RewiringExhausted`].
pub fn rewire_to_simple<R: Rng + ?Sized>(
    mut edges: Vec<Edge>,
    scope: Scope<'_>,
    rng: &mut R,
) -> Result<Rewired> {
    for e in edges.iter_mut() {
        *e = normalized(e.0, e.1);
    }
    let fixed = match scope {
        Scope::Community => None,
        Scope::Background { fixed } => Some(fixed),
    };
    let mut state = Collisions::new(&edges, fixed);
    for _ in 0..MAX_REWIRE_PASSES {
        let bad = state.bad_indices(&edges);
        if bad.is_empty() {
            break;
        }
        if edges.len() < 2 {
            break;
        }
        for i in bad {
            if !state.is_bad(edges[i]) {
                continue;
            }
            let j = rng.gen_range(0..edges.len());
            if j == i {
                continue;
            }
            let (a, b) = edges[i];
            let (c, d) = edges[j];
            let (x, y) = if rng.gen::<bool>() {
                (normalized(a, c), normalized(b, d))
            } else {
                (normalized(a, d), normalized(b, c))
            };
            let saved = state.remove(edges[i]) + state.remove(edges[j]);
            let added = state.insert(x) + state.insert(y);
            if added < saved {
                edges[i] = x;
                edges[j] = y;
            } else {
                state.remove(x);
                state.remove(y);
                state.insert(edges[i]);
                state.insert(edges[j]);
            }
        }
    }
    let bad = state.bad_indices(&edges);
    if bad.is_empty() {
        return Ok(Rewired {
            edges,
            leftovers: Vec::new(),
        });
    }
    if fixed.is_some() {
        return Err(Error::RewiringExhausted {
            remaining: bad.len(),
        });
    }
    let mut leftovers = Vec::with_capacity(bad.len());
    for &i in bad.iter().rev() {
        leftovers.push(edges.swap_remove(i));
    }
    leftovers.reverse();
    Ok(Rewired { edges, leftovers })
}

/// Where an edge was generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeOrigin {
    Community,
    Background,
}

/// Generated graph with its ground truth.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub params: GeneratorParams,
    /// Requested degree of every node.
    pub degrees: DegreeSequence,
    pub assignment: NodeAssignment,
    /// Sorted `(u, v)` with `u < v`.
    pub edges: Vec<Edge>,
    /// Origin of the edge at the same index in `edges`.
    pub origins: Vec<EdgeOrigin>,
}

impl LabeledGraph {
    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn graph(&self) -> Graph {
        Graph::from_edges(self.node_count(), self.edges.iter().copied()).expect("valid ids")
    }

    /// Fraction of edges joining two nodes of the same community.
    pub fn internal_fraction(&self) -> f64 {
        let a = &self.assignment;
        let internal = self
            .edges
            .iter()
            .filter(|&&(u, v)| {
                let cu = a.community(u as usize);
                cu.is_some() && cu == a.community(v as usize)
            })
            .count();
        internal as f64 / self.edges.len().max(1) as f64
    }
}

/// Builds the union of community graphs and the background graph.
///
/// Community `j` draws from stream `COMMUNITY_BASE + j` of `params.seed`
/// and the background from its own stream, so communities are independent
/// of each other and of processing order.
pub fn build_graph(
    params: &GeneratorParams,
    degrees: &DegreeSequence,
    assignment: &NodeAssignment,
    split: &DegreeSplit,
) -> Result<LabeledGraph> {
    let n = degrees.len();
    let mut background = split.background.clone();
    let mut community_edges = Vec::new();
    for (j, members) in assignment.members().into_iter().enumerate() {
        let stubs: Vec<u32> = members
            .iter()
            .flat_map(|&i| core::iter::repeat_n(i as u32, split.community[i] as usize))
            .collect();
        let mut rng = rng::stream(params.seed, stage::COMMUNITY_BASE + j as u64);
        let matched = configuration_matching(&stubs, &mut rng)?;
        let rewired = rewire_to_simple(matched, Scope::Community, &mut rng)?;
        for (u, v) in rewired.leftovers {
            background[u as usize] += 1;
            background[v as usize] += 1;
        }
        community_edges.extend(rewired.edges);
    }

    let stubs: Vec<u32> = background
        .iter()
        .enumerate()
        .flat_map(|(i, &z)| core::iter::repeat_n(i as u32, z as usize))
        .collect();
    let mut rng = rng::stream(params.seed, stage::BACKGROUND);
    let matched = configuration_matching(&stubs, &mut rng)?;
    let fixed = edge_set(&community_edges);
    let background_edges =
        rewire_to_simple(matched, Scope::Background { fixed: &fixed }, &mut rng)?.edges;

    let mut tagged: Vec<(Edge, EdgeOrigin)> = community_edges
        .into_iter()
        .map(|e| (e, EdgeOrigin::Community))
        .chain(
            background_edges
                .into_iter()
                .map(|e| (e, EdgeOrigin::Background)),
        )
        .collect();
    tagged.sort_unstable();
    let (edges, origins): (Vec<_>, Vec<_>) = tagged.into_iter().unzip();

    debug_assert!({
        let mut deg = alloc::vec![0u32; n];
        for &(u, v) in &edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        deg == degrees.as_slice()
    });
    Ok(LabeledGraph {
        params: params.clone(),
        degrees: degrees.clone(),
        assignment: assignment.clone(),
        edges,
        origins,
    })
}
