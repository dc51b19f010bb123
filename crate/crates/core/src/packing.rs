//! Fractional Steiner-tree packing by multiplicative weights, and guide
//! trees sampled from the packing.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId, Weight};
use crate::guide::GuideTree;
use crate::steiner::{check_connected, mehlhorn_steiner, prune_to_tree};

/// A packing of Steiner subgraphs. Each subgraph carries an integer raw
/// value; its packing value is `raw / scale`.
#[derive(Debug, Clone)]
pub struct Packing {
    pub terminals: Vec<VertexId>,
    /// `(sorted edge ids, raw value)`; identical subgraphs share an entry.
    pub entries: Vec<(Vec<EdgeId>, Weight)>,
    pub scale: f64,
    pub epsilon: f64,
    pub delta: f64,
    /// Number of iterations in which each edge's length grew.
    pub augmentations: Vec<u64>,
    pub iterations: u64,
    /// `Σ w(e)ℓ(e)` before each iteration and at the end.
    pub potential: Vec<f64>,
    /// Exact growth of `Σ w(e)ℓ(e)` in each iteration, `ε·v·Σ_{e∈H} ℓ(e)`.
    pub increments: Vec<f64>,
}

impl Packing {
    pub fn value(&self, entry: usize) -> f64 {
        self.entries[entry].1 as f64 / self.scale
    }

    pub fn total_value(&self) -> f64 {
        self.raw_total() as f64 / self.scale
    }

    pub fn raw_total(&self) -> Weight {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Raw load per edge.
    pub fn raw_load(&self, m: usize) -> Vec<Weight> {
        let mut load = vec![0; m];
        for (edges, raw) in &self.entries {
            for &id in edges {
                load[id] += raw;
            }
        }
        load
    }

    /// `Σ_{H∋e} val(H) ≤ w(e)` for every edge.
    pub fn is_feasible(&self, g: &Graph) -> bool {
        self.raw_load(g.m()).iter().zip(g.edges()).all(|(&load, e)| load as f64 <= e.w as f64 * self.scale)
    }

    /// `⌈log_{1+ε}((1+ε)/δ)⌉`, the per-edge augmentation bound on unit weights.
    pub fn augmentation_bound(&self) -> u64 {
        self.scale.ceil() as u64
    }
}

/// Smallest accepted `epsilon`; below it `δ = (2m)^{-1/ε}` underflows.
pub const MIN_EPSILON: f64 = 0.02;

/// Packs `U`-Steiner trees: while `Σ w(e)ℓ(e) < 1`, add the approximate
/// shortest Steiner tree `H` with value `min_{e∈H} w(e)` and multiply each
/// `ℓ(e)`, `e ∈ H`, by `1 + ε·v/w(e)`; finally scale by
/// `log_{1+ε}((1+ε)/δ)`.
pub fn mwu_pack(g: &Graph, terminals: &[VertexId], epsilon: f64) -> Result<Packing> {
    if !(MIN_EPSILON..0.5).contains(&epsilon) {
        return Err(Error::Parameter { name: "epsilon", value: epsilon.to_string(), expected: "in [0.02, 0.5)" });
    }
    if terminals.len() < 2 {
        return Err(Error::TooFewTerminals { need: 2, got: terminals.len() });
    }
    check_connected(g, terminals)?;
    let m = g.m();
    let delta = (2.0 * m as f64).powf(-1.0 / epsilon);
    if delta == 0.0 || !delta.is_normal() {
        return Err(Error::Parameter {
            name: "epsilon",
            value: epsilon.to_string(),
            expected: "large enough that (2m)^(-1/epsilon) is representable",
        });
    }
    let weights: Vec<f64> = g.edges().iter().map(|e| e.w as f64).collect();
    let mut lengths: Vec<f64> = weights.iter().map(|w| delta / w).collect();
    let mut potential_now = m as f64 * delta;
    let mut potential = vec![potential_now];
    let mut increments = Vec::new();
    let mut augmentations = vec![0u64; m];
    let mut index: HashMap<Vec<EdgeId>, usize> = HashMap::new();
    let mut entries: Vec<(Vec<EdgeId>, Weight)> = Vec::new();
    let mut iterations = 0;
    while potential_now < 1.0 {
        let tree = mehlhorn_steiner(g, &lengths, terminals)?;
        let v = tree.edges.iter().map(|&id| g.edge(id).w).min().unwrap();
        let mut grown = 0.0;
        for &id in &tree.edges {
            grown += epsilon * v as f64 * lengths[id];
            lengths[id] *= 1.0 + epsilon * v as f64 / weights[id];
            augmentations[id] += 1;
        }
        increments.push(grown);
        potential_now = weights.iter().zip(&lengths).map(|(w, l)| w * l).sum();
        match index.get(&tree.edges) {
            Some(&i) => entries[i].1 += v,
            None => {
                index.insert(tree.edges.clone(), entries.len());
                entries.push((tree.edges, v));
            }
        }
        iterations += 1;
        potential.push(potential_now);
    }
    let scale = ((1.0 + epsilon) / delta).ln() / (1.0 + epsilon).ln();
    let mut terminals = terminals.to_vec();
    terminals.sort_unstable();
    Ok(Packing { terminals, entries, scale, epsilon, delta, augmentations, iterations, potential, increments })
}

/// Draws `trials` subgraphs from `packing` with probability proportional
/// to value, turns each into a tree (spanning tree, then pruning of
/// non-terminal leaves) and returns them as all-real guide trees rooted at
/// source `s`.
pub fn sample_guide_trees(
    g: &Graph,
    packing: &Packing,
    s: VertexId,
    trials: usize,
    seed: u64,
) -> Result<Vec<GuideTree>> {
    if trials < 1 {
        return Err(Error::Parameter { name: "trials", value: trials.to_string(), expected: "at least 1" });
    }
    if packing.terminals.binary_search(&s).is_err() {
        return Err(Error::SourceNotInTerminals(s));
    }
    let mut prefix = Vec::with_capacity(packing.entries.len());
    let mut acc = 0;
    for (_, raw) in &packing.entries {
        acc += raw;
        prefix.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let x = rng.gen_range(0..acc);
            let i = prefix.partition_point(|&p| p <= x);
            let edges = prune_to_tree(g, &packing.entries[i].0, &packing.terminals);
            let pairs: Vec<(VertexId, VertexId)> = edges.iter().map(|&id| (g.edge(id).u, g.edge(id).v)).collect();
            GuideTree::from_vertex_edges(&pairs, s)
        })
        .collect()
}
