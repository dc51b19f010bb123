//! Weighted undirected graphs, cut evaluation and contraction.
//!
//! A [`Graph`] is immutable once built. Parallel edges are merged by summing
//! their weights and self-loops are dropped, so every algorithm downstream can
//! assume a simple weighted graph. Contraction produces a fresh graph with
//! dense ids together with a [`ContractionMap`] recording provenance.

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;
/// Edge weights and cut values. Every cut fits because `m * W_max < 2^64`.
pub type Weight = u64;

/// Largest accepted raw edge weight.
pub const DEFAULT_MAX_WEIGHT: u64 = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub w: Weight,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    // neighbors of v are adj[start[v]..start[v + 1]], in edge id order
    start: Vec<usize>,
    adj: Vec<(VertexId, EdgeId)>,
    dropped_loops: usize,
}

impl Graph {
    /// Builds a graph from raw `(u, v, w)` triples.
    ///
    /// Parallel edges are merged, self-loops are dropped (and counted), and
    /// edges are ordered by `(min endpoint, max endpoint)`.
    pub fn build(n: usize, raw_edges: &[(VertexId, VertexId, i64)]) -> Result<Graph> {
        Self::build_with_max(n, raw_edges, DEFAULT_MAX_WEIGHT)
    }

    pub fn build_with_max(n: usize, raw_edges: &[(VertexId, VertexId, i64)], max_weight: u64) -> Result<Graph> {
        let mut triples = Vec::with_capacity(raw_edges.len());
        let mut dropped_loops = 0;
        for &(u, v, w) in raw_edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if w < 1 || w as u64 > max_weight {
                return Err(Error::BadWeight { u, v, w, max: max_weight });
            }
            if u == v {
                dropped_loops += 1;
                continue;
            }
            triples.push((u.min(v), u.max(v), w as Weight));
        }
        let mut g = Self::from_normalized(n, triples);
        g.dropped_loops = dropped_loops;
        Ok(g)
    }

    /// Merges already-validated triples with `u < v`.
    pub(crate) fn from_normalized(n: usize, triples: Vec<(VertexId, VertexId, Weight)>) -> Graph {
        // bucket by u, then sort each bucket by v
        let mut start = vec![0usize; n + 1];
        for &(u, _, _) in &triples {
            start[u + 1] += 1;
        }
        for v in 0..n {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let mut sorted = vec![(0, 0); triples.len()];
        for &(u, v, w) in &triples {
            sorted[fill[u]] = (v, w);
            fill[u] += 1;
        }
        let mut edges: Vec<Edge> = Vec::with_capacity(triples.len());
        for u in 0..n {
            let bucket = &mut sorted[start[u]..start[u + 1]];
            bucket.sort_unstable();
            for &(v, w) in bucket.iter() {
                match edges.last_mut() {
                    Some(last) if last.u == u && last.v == v => last.w += w,
                    _ => edges.push(Edge { u, v, w }),
                }
            }
        }
        let mut start = vec![0usize; n + 1];
        for e in &edges {
            start[e.u + 1] += 1;
            start[e.v + 1] += 1;
        }
        for v in 0..n {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let mut adj = vec![(0, 0); 2 * edges.len()];
        for (id, e) in edges.iter().enumerate() {
            adj[fill[e.u]] = (e.v, id);
            fill[e.u] += 1;
            adj[fill[e.v]] = (e.u, id);
            fill[e.v] += 1;
        }
        Graph { n, edges, start, adj, dropped_loops: 0 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id]
    }

    /// `(neighbor, edge id)` pairs incident to `v`.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[self.start[v]..self.start[v + 1]]
    }

    /// Number of self-loops discarded at construction.
    pub fn dropped_loops(&self) -> usize {
        self.dropped_loops
    }

    pub fn total_weight(&self) -> Weight {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn max_weight(&self) -> Weight {
        self.edges.iter().map(|e| e.w).max().unwrap_or(0)
    }

    pub fn weighted_degree(&self, v: VertexId) -> Weight {
        self.neighbors(v).iter().map(|&(_, id)| self.edges[id].w).sum()
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.w == 1)
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Membership mask for `side`, validating ids.
    pub fn mask(&self, side: &[VertexId]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.n];
        for &v in side {
            self.check_vertex(v)?;
            mask[v] = true;
        }
        Ok(mask)
    }

    /// Value of the cut `(side, V \ side)`.
    pub fn cut_value(&self, side: &[VertexId]) -> Result<Weight> {
        let mask = self.mask(side)?;
        let inside = mask.iter().filter(|&&b| b).count();
        if inside == 0 || inside == self.n {
            return Err(Error::DegenerateCut);
        }
        Ok(self.cut_value_mask(&mask))
    }

    /// Cut value for a membership mask; no degeneracy check.
    pub fn cut_value_mask(&self, mask: &[bool]) -> Weight {
        self.edges.iter().filter(|e| mask[e.u] != mask[e.v]).map(|e| e.w).sum()
    }

    /// Contracts each block to a single vertex.
    ///
    /// Block `i` becomes vertex `i` of the result; vertices outside every
    /// block follow as singletons in increasing id order.
    pub fn contract(&self, blocks: &[Vec<VertexId>]) -> Result<(Graph, ContractionMap)> {
        let mut image = vec![usize::MAX; self.n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::EmptySet);
            }
            for &v in block {
                self.check_vertex(v)?;
                if image[v] != usize::MAX {
                    return Err(Error::Overlap(v));
                }
                image[v] = b;
            }
        }
        let mut next = blocks.len();
        for slot in image.iter_mut() {
            if *slot == usize::MAX {
                *slot = next;
                next += 1;
            }
        }
        Ok(self.contract_by_image(image, next))
    }

    /// Contraction from a precomputed surjective image map onto `0..count`.
    pub(crate) fn contract_by_image(&self, image: Vec<usize>, count: usize) -> (Graph, ContractionMap) {
        let mut origin = vec![Vec::new(); count];
        for (v, &img) in image.iter().enumerate() {
            origin[img].push(v);
        }
        let triples = self
            .edges
            .iter()
            .filter_map(|e| {
                let (a, b) = (image[e.u], image[e.v]);
                (a != b).then(|| (a.min(b), a.max(b), e.w))
            })
            .collect();
        let g = Graph::from_normalized(count, triples);
        (g, ContractionMap { origin, image })
    }

    /// Induced connectivity components, as a component id per vertex.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut comp = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..self.n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            stack.push(start);
            while let Some(x) = stack.pop() {
                for &(y, _) in self.neighbors(x) {
                    if comp[y] == usize::MAX {
                        comp[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }
}

/// One side of a cut together with its value `δ(side)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    /// Sorted vertex ids.
    pub side: Vec<VertexId>,
    pub value: Weight,
}

impl Cut {
    pub fn from_mask(mask: &[bool], value: Weight) -> Cut {
        Cut { side: mask_to_vec(mask), value }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.side.binary_search(&v).is_ok()
    }
}

/// Provenance of a contracted graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionMap {
    /// Original vertices represented by each contracted vertex.
    pub origin: Vec<Vec<VertexId>>,
    /// Contracted representative of each original vertex.
    pub image: Vec<VertexId>,
}

impl ContractionMap {
    /// Expands a set of contracted vertices to original vertices (sorted).
    pub fn expand(&self, side: &[VertexId]) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = side.iter().flat_map(|&x| self.origin[x].iter().copied()).collect();
        out.sort_unstable();
        out
    }

    pub fn expand_mask(&self, mask: &[bool]) -> Vec<bool> {
        self.image.iter().map(|&x| mask[x]).collect()
    }
}

pub fn mask_to_vec(mask: &[bool]) -> Vec<VertexId> {
    mask.iter().enumerate().filter_map(|(v, &b)| b.then_some(v)).collect()
}

pub fn vec_to_mask(n: usize, side: &[VertexId]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in side {
        mask[v] = true;
    }
    mask
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k4() -> Graph {
        Graph::build(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)]).unwrap()
    }

    #[test]
    fn parallel_edges_merge() {
        let g = Graph::build(2, &[(0, 1, 3), (1, 0, 4)]).unwrap();
        assert_eq!(g.edges(), &[Edge { u: 0, v: 1, w: 7 }]);
    }

    #[test]
    fn path_graph() {
        let g = Graph::build(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.neighbors(1).len(), 2);
    }

    #[test]
    fn self_loop_dropped_and_counted() {
        let g = Graph::build(3, &[(0, 0, 5), (0, 1, 2)]).unwrap();
        assert_eq!(g.edges(), &[Edge { u: 0, v: 1, w: 2 }]);
        assert_eq!(g.dropped_loops(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Graph::build(2, &[(0, 1, 0)]), Err(Error::BadWeight { .. })));
        assert!(matches!(Graph::build(2, &[(0, 1, -3)]), Err(Error::BadWeight { .. })));
        assert!(matches!(Graph::build(2, &[(0, 2, 1)]), Err(Error::VertexOutOfRange { vertex: 2, .. })));
        assert!(Graph::build(2, &[(0, 1, 1 << 31)]).is_err());
    }

    #[test]
    fn cut_values() {
        let p3 = Graph::build(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        assert_eq!(p3.cut_value(&[0]).unwrap(), 1);
        assert_eq!(k4().cut_value(&[0, 1]).unwrap(), 4);
        let tri = Graph::build(3, &[(0, 1, 2), (1, 2, 3), (0, 2, 4)]).unwrap();
        assert_eq!(tri.cut_value(&[1]).unwrap(), 5);
        assert_eq!(p3.cut_value(&[]), Err(Error::DegenerateCut));
        assert_eq!(p3.cut_value(&[0, 1, 2]), Err(Error::DegenerateCut));
    }

    #[test]
    fn contraction_examples() {
        let p3 = Graph::build(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        let (c, map) = p3.contract(&[vec![0, 1]]).unwrap();
        assert_eq!(c.n(), 2);
        assert_eq!(c.edges(), &[Edge { u: 0, v: 1, w: 1 }]);
        assert_eq!(map.origin, vec![vec![0, 1], vec![2]]);

        let (c, _) = k4().contract(&[vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(c.edges(), &[Edge { u: 0, v: 1, w: 4 }]);

        let g = k4();
        let (c, map) = g.contract(&[]).unwrap();
        assert_eq!(c, g);
        assert_eq!(map.image, vec![0, 1, 2, 3]);

        assert_eq!(g.contract(&[vec![0, 1], vec![1, 2]]).unwrap_err(), Error::Overlap(1));
    }

    fn arb_graph() -> impl Strategy<Value = (usize, Vec<(usize, usize, i64)>)> {
        (2usize..9).prop_flat_map(|n| {
            let e = (0..n, 0..n, 1i64..10);
            (Just(n), prop::collection::vec(e, 0..20))
        })
    }

    proptest! {
        #[test]
        fn contraction_preserves_cut_values(
            (n, raw) in arb_graph(),
            labels in prop::collection::vec(0usize..4, 9),
            pick in prop::collection::vec(any::<bool>(), 9),
        ) {
            let g = Graph::build(n, &raw).unwrap();
            let mut blocks = vec![Vec::new(); 4];
            for v in 0..n {
                blocks[labels[v]].push(v);
            }
            blocks.retain(|b| !b.is_empty());
            let (c, map) = g.contract(&blocks).unwrap();
            let mask: Vec<bool> = (0..c.n()).map(|x| pick[x % pick.len()]).collect();
            let expanded = map.expand_mask(&mask);
            prop_assert_eq!(c.cut_value_mask(&mask), g.cut_value_mask(&expanded));
        }

        #[test]
        fn cut_value_symmetric((n, raw) in arb_graph(), pick in prop::collection::vec(any::<bool>(), 9)) {
            let g = Graph::build(n, &raw).unwrap();
            let mask: Vec<bool> = (0..n).map(|v| pick[v]).collect();
            let comp: Vec<bool> = mask.iter().map(|b| !b).collect();
            prop_assert_eq!(g.cut_value_mask(&mask), g.cut_value_mask(&comp));
        }

        #[test]
        fn build_is_order_independent((n, mut raw) in arb_graph()) {
            let a = Graph::build(n, &raw).unwrap();
            raw.reverse();
            let b = Graph::build(n, &raw).unwrap();
            prop_assert_eq!(a.edges(), b.edges());
        }
    }
}
