//! Exact s-t max-flow (Dinic) on undirected integer-weighted graphs.
//!
//! Every undirected edge becomes a pair of antiparallel arcs of capacity
//! `w`. After the flow is maximal, the vertices reachable from `s` in the
//! residual network form the minimal source side; the complement of the
//! vertices that reach `t` forms the maximal one.

use std::cell::Cell;

use crate::error::{Error, Result};
use crate::graph::{mask_to_vec, Cut, Graph, VertexId, Weight};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    pub value: Weight,
    /// Vertex-minimal side containing `s`.
    pub min_source_side: Cut,
    /// Vertex-maximal side containing `s`.
    pub max_source_side: Cut,
    /// Net flow on each graph edge, oriented from `edge.u` to `edge.v`.
    pub edge_flow: Vec<i64>,
}

/// Cumulative work done by [`max_flow`] on the current thread.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FlowCounters {
    pub calls: u64,
    pub vertices: u64,
    pub edges: u64,
}

impl std::ops::Add for FlowCounters {
    type Output = FlowCounters;
    fn add(self, rhs: FlowCounters) -> FlowCounters {
        FlowCounters {
            calls: self.calls + rhs.calls,
            vertices: self.vertices + rhs.vertices,
            edges: self.edges + rhs.edges,
        }
    }
}

impl std::ops::Sub for FlowCounters {
    type Output = FlowCounters;
    fn sub(self, rhs: FlowCounters) -> FlowCounters {
        FlowCounters {
            calls: self.calls - rhs.calls,
            vertices: self.vertices - rhs.vertices,
            edges: self.edges - rhs.edges,
        }
    }
}

thread_local! {
    static COUNTERS: Cell<FlowCounters> = const { Cell::new(FlowCounters { calls: 0, vertices: 0, edges: 0 }) };
}

pub fn counters() -> FlowCounters {
    COUNTERS.with(|c| c.get())
}

/// Runs `f` and returns its result with the flow work it performed.
pub fn measured<T>(f: impl FnOnce() -> T) -> (T, FlowCounters) {
    let before = counters();
    let out = f();
    (out, counters() - before)
}

fn record(g: &Graph) {
    COUNTERS.with(|c| {
        let mut v = c.get();
        v.calls += 1;
        v.vertices += g.n() as u64;
        v.edges += g.m() as u64;
        c.set(v);
    });
}

/// Exact `(s, t)` max-flow with minimal and maximal source-side mincuts.
pub fn max_flow(g: &Graph, s: VertexId, t: VertexId) -> Result<FlowResult> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if s == t {
        return Err(Error::SameEndpoints(s));
    }
    record(g);
    let mut net = Dinic::new(g);
    let value = net.run(s, t);

    let from_s = net.residual_reach(s, false);
    let to_t = net.residual_reach(t, true);
    let max_mask: Vec<bool> = to_t.iter().map(|&b| !b).collect();
    let edge_flow = (0..g.m()).map(|id| g.edge(id).w as i64 - net.cap[2 * id] as i64).collect();
    Ok(FlowResult {
        value,
        min_source_side: Cut { side: mask_to_vec(&from_s), value },
        max_source_side: Cut { side: mask_to_vec(&max_mask), value },
        edge_flow,
    })
}

/// `λ(s, t)` and the minimal source side as a mask, without the flow
/// itself or the maximal side.
pub fn min_cut(g: &Graph, s: VertexId, t: VertexId) -> Result<(Weight, Vec<bool>)> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if s == t {
        return Err(Error::SameEndpoints(s));
    }
    record(g);
    WORK.with(|w| {
        let mut net = w.borrow_mut();
        net.reset(g);
        let value = net.run(s, t);
        Ok((value, net.residual_reach(s, false)))
    })
}

/// Checks capacity and conservation of `res.edge_flow` and that its net
/// outflow from `s` equals `res.value`.
pub fn check_flow(g: &Graph, s: VertexId, t: VertexId, res: &FlowResult) -> bool {
    let mut excess = vec![0i64; g.n()];
    for (id, e) in g.edges().iter().enumerate() {
        let f = res.edge_flow[id];
        if f.unsigned_abs() > e.w {
            return false;
        }
        excess[e.u] -= f;
        excess[e.v] += f;
    }
    excess.iter().enumerate().all(|(v, &x)| match v {
        _ if v == s => x == -(res.value as i64),
        _ if v == t => x == res.value as i64,
        _ => x == 0,
    })
}

struct Dinic {
    n: usize,
    head: Vec<usize>,
    // arc 2i: u -> v, arc 2i+1: v -> u for graph edge i
    to: Vec<usize>,
    cap: Vec<Weight>,
    next: Vec<usize>,
    level: Vec<u32>,
    iter: Vec<usize>,
    queue: Vec<usize>,
}

const NIL: usize = usize::MAX;

thread_local! {
    // reused buffers for `min_cut`
    static WORK: std::cell::RefCell<Dinic> = std::cell::RefCell::new(Dinic::empty());
}

impl Dinic {
    fn empty() -> Self {
        Dinic {
            n: 0,
            head: Vec::new(),
            to: Vec::new(),
            cap: Vec::new(),
            next: Vec::new(),
            level: Vec::new(),
            iter: Vec::new(),
            queue: Vec::new(),
        }
    }

    fn new(g: &Graph) -> Self {
        let mut d = Dinic::empty();
        d.reset(g);
        d
    }

    fn reset(&mut self, g: &Graph) {
        let n = g.n();
        self.n = n;
        self.head.clear();
        self.head.resize(n, NIL);
        self.level.clear();
        self.level.resize(n, 0);
        self.iter.clear();
        self.iter.resize(n, NIL);
        self.to.clear();
        self.cap.clear();
        self.next.clear();
        self.queue.clear();
        for e in g.edges() {
            self.push_arc(e.u, e.v, e.w);
            self.push_arc(e.v, e.u, e.w);
        }
    }

    fn push_arc(&mut self, from: usize, to: usize, cap: Weight) {
        self.to.push(to);
        self.cap.push(cap);
        self.next.push(self.head[from]);
        self.head[from] = self.to.len() - 1;
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = u32::MAX);
        self.level[s] = 0;
        self.queue.clear();
        self.queue.push(s);
        let mut front = 0;
        while front < self.queue.len() {
            let x = self.queue[front];
            front += 1;
            let mut a = self.head[x];
            while a != NIL {
                let y = self.to[a];
                if self.cap[a] > 0 && self.level[y] == u32::MAX {
                    self.level[y] = self.level[x] + 1;
                    self.queue.push(y);
                }
                a = self.next[a];
            }
        }
        self.level[t] != u32::MAX
    }

    fn dfs(&mut self, x: usize, t: usize, limit: Weight) -> Weight {
        if x == t {
            return limit;
        }
        while self.iter[x] != NIL {
            let a = self.iter[x];
            let y = self.to[a];
            if self.cap[a] > 0 && self.level[y] == self.level[x] + 1 {
                let pushed = self.dfs(y, t, limit.min(self.cap[a]));
                if pushed > 0 {
                    self.cap[a] -= pushed;
                    self.cap[a ^ 1] += pushed;
                    return pushed;
                }
            }
            self.iter[x] = self.next[a];
        }
        0
    }

    fn run(&mut self, s: usize, t: usize) -> Weight {
        let mut total = 0;
        while self.bfs(s, t) {
            self.iter.copy_from_slice(&self.head);
            loop {
                let pushed = self.dfs(s, t, Weight::MAX);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }

    /// Residual reachability from `root`; `reverse` follows arcs backwards.
    fn residual_reach(&self, root: usize, reverse: bool) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            let mut a = self.head[x];
            while a != NIL {
                let y = self.to[a];
                // forward: x -> y usable if cap[a] > 0; backward: y -> x usable if cap[a ^ 1] > 0
                let usable = if reverse { self.cap[a ^ 1] > 0 } else { self.cap[a] > 0 };
                if usable && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
                a = self.next[a];
            }
        }
        seen
    }
}
