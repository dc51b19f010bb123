//! Minimum isolating cuts for disjoint terminal sets in `O(log h)` rounds of
//! max-flow plus one flow per set on pairwise-disjoint regions.

use crate::error::{Error, Result};
use crate::graph::{Cut, Graph, VertexId};
use crate::maxflow::min_cut;

/// For each `sets[i]`, the vertex-minimal `(sets[i], ∪_{j≠i} sets[j])`-mincut.
///
/// Returned sides are pairwise disjoint.
pub fn isolating_cuts(g: &Graph, sets: &[Vec<VertexId>]) -> Result<Vec<Cut>> {
    let h = sets.len();
    if h < 2 {
        return Err(Error::TooFewTerminals { need: 2, got: h });
    }
    let n = g.n();
    let mut owner = vec![usize::MAX; n];
    for (i, set) in sets.iter().enumerate() {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        for &v in set {
            g.check_vertex(v)?;
            if owner[v] != usize::MAX {
                return Err(Error::Overlap(v));
            }
            owner[v] = i;
        }
    }

    // region[v] is the index whose region still contains v, or NONE once
    // two phases disagree.
    const NONE: usize = usize::MAX;
    let mut signature = vec![0usize; n];
    let bits = usize::BITS - (h - 1).leading_zeros();
    for b in 0..bits {
        let (ones, zeros): (Vec<usize>, Vec<usize>) = (0..h).partition(|i| i >> b & 1 == 1);
        let a: Vec<VertexId> = ones.iter().flat_map(|&i| sets[i].iter().copied()).collect();
        let z: Vec<VertexId> = zeros.iter().flat_map(|&i| sets[i].iter().copied()).collect();
        let (cg, map) = g.contract(&[a, z])?;
        let (_, src) = min_cut(&cg, 0, 1)?;
        for v in 0..n {
            if src[map.image[v]] {
                signature[v] |= 1 << b;
            }
        }
    }
    let mut region = vec![NONE; n];
    for v in 0..n {
        if signature[v] < h {
            region[v] = signature[v];
        }
    }

    // one graph per region in a single pass: the set is local vertex 0,
    // everything outside the region is local vertex 1
    let mut local = vec![0usize; n];
    let mut members: Vec<Vec<VertexId>> = vec![vec![usize::MAX, usize::MAX]; h];
    for v in 0..n {
        if let Some(i) = (region[v] != NONE).then_some(region[v]) {
            if owner[v] == i {
                local[v] = 0;
            } else {
                local[v] = members[i].len();
                members[i].push(v);
            }
        }
    }
    let mut triples: Vec<Vec<(VertexId, VertexId, u64)>> = vec![Vec::new(); h];
    for e in g.edges() {
        let (ru, rv) = (region[e.u], region[e.v]);
        if ru == rv && ru != NONE {
            let (a, b) = (local[e.u], local[e.v]);
            if a != b {
                triples[ru].push((a.min(b), a.max(b), e.w));
            }
            continue;
        }
        if ru != NONE {
            triples[ru].push((local[e.u].min(1), local[e.u].max(1), e.w));
        }
        if rv != NONE {
            triples[rv].push((local[e.v].min(1), local[e.v].max(1), e.w));
        }
    }
    let mut cuts = Vec::with_capacity(h);
    for (i, t) in triples.into_iter().enumerate() {
        let rg = Graph::from_normalized(members[i].len(), t);
        let (value, src) = min_cut(&rg, 0, 1)?;
        let mut side: Vec<VertexId> = sets[i].clone();
        side.extend((2..rg.n()).filter(|&x| src[x]).map(|x| members[i][x]));
        side.sort_unstable();
        cuts.push(Cut { side, value });
    }
    Ok(cuts)
}
