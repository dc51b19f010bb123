//! Static 2-approximate Steiner trees (Mehlhorn's construction).

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};

/// A tree in `g`, given by edge ids, spanning a terminal set.
#[derive(Debug, Clone, PartialEq)]
pub struct SteinerTree {
    /// Sorted edge ids.
    pub edges: Vec<EdgeId>,
    /// Total length under the lengths it was built with.
    pub length: f64,
}

#[derive(PartialEq)]
struct Entry {
    dist: f64,
    origin: VertexId,
    v: VertexId,
}

impl Eq for Entry {}

impl Ord for Entry {
    // min-heap on (dist, origin terminal, vertex)
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then(other.origin.cmp(&self.origin)).then(other.v.cmp(&self.v))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Errors unless all `terminals` share one connected component.
pub fn check_connected(g: &Graph, terminals: &[VertexId]) -> Result<()> {
    for &t in terminals {
        g.check_vertex(t)?;
    }
    let (_, comp) = g.components();
    let anchor = terminals[0];
    let unreachable: Vec<VertexId> = terminals.iter().copied().filter(|&t| comp[t] != comp[anchor]).collect();
    if unreachable.is_empty() {
        Ok(())
    } else {
        Err(Error::DisconnectedTerminals { anchor, unreachable })
    }
}

/// A Steiner tree for `terminals` of length at most twice the optimum.
///
/// Shortest paths from all terminals at once assign every vertex its
/// closest terminal; each graph edge between two regions yields a helper
/// edge between their terminals; a minimum spanning tree of the helper
/// edges is expanded back into graph paths and non-terminal leaves are
/// pruned.
pub fn mehlhorn_steiner(g: &Graph, lengths: &[f64], terminals: &[VertexId]) -> Result<SteinerTree> {
    if terminals.len() < 2 {
        return Err(Error::TooFewTerminals { need: 2, got: terminals.len() });
    }
    check_connected(g, terminals)?;
    let n = g.n();
    let mut dist = vec![f64::INFINITY; n];
    let mut origin = vec![usize::MAX; n];
    let mut pred = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    for &t in terminals {
        dist[t] = 0.0;
        origin[t] = t;
        heap.push(Entry { dist: 0.0, origin: t, v: t });
    }
    while let Some(Entry { dist: d, origin: o, v }) = heap.pop() {
        if d > dist[v] || (d == dist[v] && o != origin[v]) {
            continue;
        }
        for &(y, id) in g.neighbors(v) {
            let nd = d + lengths[id];
            if nd < dist[y] || (nd == dist[y] && o < origin[y]) {
                dist[y] = nd;
                origin[y] = o;
                pred[y] = id;
                heap.push(Entry { dist: nd, origin: o, v: y });
            }
        }
    }

    let mut helper: Vec<(f64, EdgeId)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| origin[e.u] != origin[e.v] && origin[e.u] != usize::MAX)
        .map(|(id, e)| (dist[e.u] + lengths[id] + dist[e.v], id))
        .collect();
    helper.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut dsu = Dsu::new(n);
    let mut chosen = vec![false; g.m()];
    let mut joined = 1;
    for &(_, id) in &helper {
        if joined == terminals.len() {
            break;
        }
        let e = g.edge(id);
        if dsu.union(origin[e.u], origin[e.v]) {
            joined += 1;
            chosen[id] = true;
            for mut x in [e.u, e.v] {
                while pred[x] != usize::MAX && !chosen[pred[x]] {
                    chosen[pred[x]] = true;
                    x = g.edge(pred[x]).other(x);
                }
            }
        }
    }
    let edges: Vec<EdgeId> = (0..g.m()).filter(|&id| chosen[id]).collect();
    let edges = prune_to_tree(g, &edges, terminals);
    let length = edges.iter().map(|&id| lengths[id]).sum();
    Ok(SteinerTree { edges, length })
}

/// A spanning forest of the given edges with non-terminal leaves removed
/// repeatedly. Sorted edge ids.
pub(crate) fn prune_to_tree(g: &Graph, edges: &[EdgeId], terminals: &[VertexId]) -> Vec<EdgeId> {
    let n = g.n();
    let mut dsu = Dsu::new(n);
    let mut keep: Vec<EdgeId> = edges.iter().copied().filter(|&id| dsu.union(g.edge(id).u, g.edge(id).v)).collect();
    keep.sort_unstable();
    let mut is_terminal = vec![false; n];
    terminals.iter().for_each(|&t| is_terminal[t] = true);
    let mut incident: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    for &id in &keep {
        let e = g.edge(id);
        incident[e.u].push(id);
        incident[e.v].push(id);
    }
    let mut alive = vec![true; g.m()];
    let mut degree: Vec<usize> = incident.iter().map(Vec::len).collect();
    let mut queue: VecDeque<VertexId> = (0..n).filter(|&v| degree[v] == 1 && !is_terminal[v]).collect();
    while let Some(v) = queue.pop_front() {
        if degree[v] != 1 {
            continue;
        }
        let id = *incident[v].iter().find(|&&id| alive[id]).unwrap();
        alive[id] = false;
        degree[v] = 0;
        let y = g.edge(id).other(v);
        degree[y] -= 1;
        if degree[y] == 1 && !is_terminal[y] {
            queue.push_back(y);
        }
    }
    keep.retain(|&id| alive[id]);
    keep
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        self.parent[a] = b;
        true
    }
}
