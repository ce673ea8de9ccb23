//! Generator and analysis primitives for ABCD+o benchmark graphs.
//!
//! ABCD+o graphs are random graphs with power-law degrees, power-law
//! community sizes, a mixing parameter `xi` that routes part of every
//! node's degree to a global background graph, and a set of outlier nodes
//! that belong to no community at all.
//!
//! The crate is `no_std` (it needs `alloc`) and contains no IO. The
//! `abcdo` crate layers file formats and a command line on top.
//!
//! Pipeline:
//!
//! 1. [`distspec`]: truncated discrete power laws.
//! 2. [`sequences`]: degree sequence and community sizes.
//! 3. [`assignment`]: outlier selection, node-to-community assignment and
//!    the community/background degree split.
//! 4. [`construction`]: configuration-model matching and rewiring.
//!
//! Analysis lives in [`clustering`] (modularity, Louvain, ECG), [`scores`]
//! (outlier scores and AUC), [`centrality`] and [`kcore`].
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod assignment;
pub mod centrality;
pub mod clustering;
pub mod construction;
pub mod distspec;
mod error;
pub mod generator;
pub mod graph;
pub mod kcore;
pub mod rng;
pub mod scores;
pub mod sequences;

pub use error::{Error, Result};
pub use generator::{generate, generate_from_sequences, DegreeSource, GeneratorParams, SizeSource};
pub use graph::{Graph, Partition};
