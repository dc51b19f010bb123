//! Seeded random graphs for tests and benchmarks.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, VertexId};

/// `m` distinct edges drawn uniformly (capped at `n(n-1)/2`), weights
/// uniform in `1..=max_w`. When `connected`, a random spanning tree is
/// placed first and counts towards `m`.
pub fn random_graph(n: usize, m: usize, max_w: u64, connected: bool, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = n * n.saturating_sub(1) / 2;
    let m = m.min(cap);
    let mut seen: HashSet<(VertexId, VertexId)> = HashSet::new();
    let mut edges = Vec::with_capacity(m);
    let push = |a: VertexId, b: VertexId, rng: &mut ChaCha8Rng, seen: &mut HashSet<_>, edges: &mut Vec<_>| {
        let key = (a.min(b), a.max(b));
        if a != b && seen.insert(key) {
            edges.push((key.0, key.1, rng.gen_range(1..=max_w) as i64));
        }
    };
    if connected && n > 1 {
        let mut order: Vec<VertexId> = (0..n).collect();
        order.shuffle(&mut rng);
        for i in 1..n {
            let j = rng.gen_range(0..i);
            push(order[i], order[j], &mut rng, &mut seen, &mut edges);
        }
    }
    if m * 2 > cap {
        // dense: shuffle all pairs instead of rejection sampling
        let mut pairs: Vec<(VertexId, VertexId)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        pairs.shuffle(&mut rng);
        for (a, b) in pairs {
            if edges.len() >= m {
                break;
            }
            push(a, b, &mut rng, &mut seen, &mut edges);
        }
    } else {
        while edges.len() < m {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            push(a, b, &mut rng, &mut seen, &mut edges);
        }
    }
    Graph::build(n, &edges).expect("generated edges are valid")
}

/// Connected graph with `m ≈ 3n`.
pub fn sparse(n: usize, max_w: u64, seed: u64) -> Graph {
    random_graph(n, 3 * n, max_w, true, seed)
}

/// Connected graph with `m ≈ n²/4`.
pub fn dense(n: usize, max_w: u64, seed: u64) -> Graph {
    random_graph(n, n * n / 4, max_w, true, seed)
}

/// `k` distinct vertices of `0..n`, sorted.
pub fn random_subset(n: usize, k: usize, seed: u64) -> Vec<VertexId> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = rand::seq::index::sample(&mut rng, n, k.min(n)).into_vec();
    out.sort_unstable();
    out
}
