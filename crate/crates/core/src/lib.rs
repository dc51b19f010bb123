//! Gomory-Hu trees and all-pairs max-flow values for weighted undirected
//! graphs.
//!
//! Three constructors are provided: the classic contraction algorithm,
//! Gusfield's variant on the uncontracted graph, and a randomized
//! recursive construction ([`ghtree::ghtree_fast`]) driven by isolating
//! cuts and guide-tree based single-source mincuts. The [`verify`] module
//! holds brute-force oracles used by the tests.

pub mod error;
pub mod gen;
pub mod ghtree;
pub mod graph;
pub mod guide;
pub mod io;
pub mod isolating;
pub mod maxflow;
pub mod oracles;
pub mod packing;
pub mod ssmc;
pub mod steiner;
pub mod verify;

pub use error::{Error, Result};
pub use ghtree::{ghtree_fast, gomory_hu_classic, gusfield, FastConfig, GhTree};
pub use graph::{ContractionMap, Cut, Graph, VertexId, Weight};
pub use maxflow::{max_flow, FlowResult};

/// Child seed for `salt` (splitmix64 finalizer over both inputs).
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(0x632b_e59b_d9b4_e019);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
