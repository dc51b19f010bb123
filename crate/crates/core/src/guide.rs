//! Guide trees: trees over graph vertices ("real" nodes) and auxiliary
//! "fake" nodes, with a distinguished real source.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::VertexId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Real(VertexId),
    Fake(usize),
}

impl Node {
    pub fn real(self) -> Option<VertexId> {
        match self {
            Node::Real(v) => Some(v),
            Node::Fake(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuideTree {
    nodes: Vec<Node>,
    adj: Vec<Vec<usize>>,
    source: usize,
}

impl GuideTree {
    /// Builds a tree from node labels and edges between node indices.
    pub fn new(nodes: Vec<Node>, edges: &[(usize, usize)], source: usize) -> Result<GuideTree> {
        let len = nodes.len();
        if len == 0 {
            return Err(Error::MalformedTree("guide tree has no nodes".into()));
        }
        if edges.len() != len - 1 {
            return Err(Error::MalformedTree(format!("{} nodes need {} edges, got {}", len, len - 1, edges.len())));
        }
        let mut seen = HashMap::new();
        for (i, node) in nodes.iter().enumerate() {
            if seen.insert(*node, i).is_some() {
                return Err(Error::MalformedTree(format!("duplicate node {node:?}")));
            }
        }
        if source >= len || nodes[source].real().is_none() {
            return Err(Error::MalformedTree("source must be a real node".into()));
        }
        let mut adj = vec![Vec::new(); len];
        for &(a, b) in edges {
            if a >= len || b >= len || a == b {
                return Err(Error::MalformedTree(format!("bad edge ({a}, {b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let tree = GuideTree { nodes, adj, source };
        if tree.reach(0, usize::MAX).len() != len {
            return Err(Error::MalformedTree("guide tree is disconnected".into()));
        }
        Ok(tree)
    }

    /// All-real tree given as edges between graph vertices.
    pub fn from_vertex_edges(edges: &[(VertexId, VertexId)], s: VertexId) -> Result<GuideTree> {
        let mut verts: Vec<VertexId> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        verts.push(s);
        verts.sort_unstable();
        verts.dedup();
        let pos = |v: VertexId| verts.binary_search(&v).unwrap();
        let idx_edges: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (pos(a), pos(b))).collect();
        let source = pos(s);
        GuideTree::new(verts.into_iter().map(Node::Real).collect(), &idx_edges, source)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> Node {
        self.nodes[i]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn source_vertex(&self) -> VertexId {
        self.nodes[self.source].real().unwrap()
    }

    /// Edges as node-index pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> =
            (0..self.len()).flat_map(|a| self.adj[a].iter().filter(move |&&b| a < b).map(move |&b| (a, b))).collect();
        out.sort_unstable();
        out
    }

    /// R(T): the real vertices, sorted.
    pub fn real_vertices(&self) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self.nodes.iter().filter_map(|n| n.real()).collect();
        out.sort_unstable();
        out
    }

    pub fn real_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.real().is_some()).count()
    }

    pub fn fake_count(&self) -> usize {
        self.len() - self.real_count()
    }

    pub fn position(&self, node: Node) -> Option<usize> {
        self.nodes.iter().position(|&x| x == node)
    }

    /// Node indices reachable from `root` without passing through `blocked`.
    fn reach(&self, root: usize, blocked: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        seen[root] = true;
        let mut stack = vec![root];
        let mut out = Vec::new();
        while let Some(x) = stack.pop() {
            out.push(x);
            for &y in &self.adj[x] {
                if y != blocked && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// A node `c` such that every component of `T - c` holds at most half
    /// of the real nodes: the deepest node (rooted at node 0) whose subtree
    /// holds at least half of them, lowest index among equally deep ones.
    pub fn centroid(&self) -> usize {
        let len = self.len();
        let total = self.real_count();
        let mut parent = vec![usize::MAX; len];
        let mut depth = vec![0usize; len];
        let mut order = Vec::with_capacity(len);
        let mut seen = vec![false; len];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            order.push(x);
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = x;
                    depth[y] = depth[x] + 1;
                    stack.push(y);
                }
            }
        }
        let mut count = vec![0usize; len];
        for &x in order.iter().rev() {
            if self.nodes[x].real().is_some() {
                count[x] += 1;
            }
            if parent[x] != usize::MAX {
                count[parent[x]] += count[x];
            }
        }
        (0..len).filter(|&x| 2 * count[x] >= total).max_by_key(|&x| (depth[x], std::cmp::Reverse(x))).unwrap_or(0)
    }

    /// Components of `T - c`, one per neighbor `u` of `c` in adjacency
    /// order, as `(u, sorted node indices)`.
    pub fn branches(&self, c: usize) -> Vec<(usize, Vec<usize>)> {
        self.adj[c].iter().map(|&u| (u, self.reach(u, c))).collect()
    }

    /// The subtree induced by `keep` (which must be connected), with the
    /// source moved to node index `source` of `self`.
    pub fn induced(&self, keep: &[usize], source: usize) -> GuideTree {
        let mut index = vec![usize::MAX; self.len()];
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        for (i, &x) in keep.iter().enumerate() {
            index[x] = i;
        }
        let nodes = keep.iter().map(|&x| self.nodes[x]).collect();
        let adj = keep
            .iter()
            .map(|&x| self.adj[x].iter().filter(|&&y| index[y] != usize::MAX).map(|&y| index[y]).collect())
            .collect();
        GuideTree { nodes, adj, source: index[source] }
    }

    /// Relabels nodes and appends one extra node attached to `attach`.
    /// Used when a branch is moved into a contracted graph.
    pub(crate) fn rebuild(
        &self,
        keep: &[usize],
        relabel: impl Fn(Node) -> Node,
        extra: Node,
        attach: usize,
        source: Option<usize>,
    ) -> GuideTree {
        let sub = self.induced(keep, keep[0]);
        let mut nodes: Vec<Node> = sub.nodes.iter().map(|&n| relabel(n)).collect();
        let mut adj = sub.adj;
        let extra_idx = nodes.len();
        nodes.push(extra);
        let a = keep.binary_search(&attach).expect("attach node kept");
        adj[a].push(extra_idx);
        adj.push(vec![a]);
        let source = match source {
            Some(x) => keep.binary_search(&x).expect("source kept"),
            None => extra_idx,
        };
        GuideTree { nodes, adj, source }
    }
}
