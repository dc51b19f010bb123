//! Gomory-Hu (Steiner) trees: the classic contraction algorithm, Gusfield's
//! variant, and a randomized recursive construction that finds many
//! mincuts per step.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::derive_seed;
use crate::error::{Error, Result};
use crate::graph::{Cut, Graph, VertexId, Weight};
use crate::isolating::isolating_cuts;
use crate::maxflow::{counters, min_cut, FlowCounters};
use crate::oracles::{ExactSsmc, FlowMemo, SsmcApprox};
use crate::ssmc::{sstm_no_promise_memo, Estimates, SsmcConfig};
use crate::verify::{validate_tiered, NO_PAIR};

/// A tree on terminals `U` with weighted edges, plus a map `f: V → U`.
///
/// For terminals `a ≠ b`, the lightest edge on the tree path is a minimum
/// `(a, b)`-cut value, and the `f`-preimage of either side of that edge is
/// such a cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhTree {
    n: usize,
    terminals: Vec<VertexId>,
    edges: Vec<(VertexId, VertexId, Weight)>,
    rep: Vec<VertexId>,
}

impl GhTree {
    /// Checks shape: `|U| - 1` edges forming a tree on `U`, and `f`
    /// fixing every terminal. Edges are normalized to `a < b` and sorted.
    pub fn new(
        n: usize,
        mut terminals: Vec<VertexId>,
        edges: Vec<(VertexId, VertexId, Weight)>,
        rep: Vec<VertexId>,
    ) -> Result<GhTree> {
        let bad = |msg: String| Err(Error::MalformedTree(msg));
        terminals.sort_unstable();
        terminals.dedup();
        if terminals.is_empty() {
            return bad("no terminals".into());
        }
        if let Some(&v) = terminals.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        if rep.len() != n {
            return bad(format!("map covers {} of {} vertices", rep.len(), n));
        }
        let is_terminal = |v: VertexId| terminals.binary_search(&v).is_ok();
        if let Some(v) = (0..n).find(|&v| !is_terminal(rep[v]) || (is_terminal(v) && rep[v] != v)) {
            return bad(format!("vertex {v} maps to {}", rep[v]));
        }
        if edges.len() + 1 != terminals.len() {
            return bad(format!("{} edges for {} terminals", edges.len(), terminals.len()));
        }
        let mut edges: Vec<(VertexId, VertexId, Weight)> =
            edges.into_iter().map(|(a, b, w)| (a.min(b), a.max(b), w)).collect();
        edges.sort_unstable();
        if let Some(e) = edges.iter().find(|e| !is_terminal(e.0) || !is_terminal(e.1) || e.0 == e.1) {
            return bad(format!("edge ({}, {}) is not between distinct terminals", e.0, e.1));
        }
        let t = GhTree { n, terminals, edges, rep };
        if t.component(t.terminals[0], None).len() != t.terminals.len() {
            return bad("tree is disconnected".into());
        }
        Ok(t)
    }

    /// One terminal, every vertex mapped to it.
    pub fn single(n: usize, u: VertexId) -> GhTree {
        GhTree { n, terminals: vec![u], edges: Vec::new(), rep: vec![u; n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terminals(&self) -> &[VertexId] {
        &self.terminals
    }

    /// Sorted `(a, b, w)` with `a < b`.
    pub fn edges(&self) -> &[(VertexId, VertexId, Weight)] {
        &self.edges
    }

    pub fn rep(&self, v: VertexId) -> VertexId {
        self.rep[v]
    }

    pub fn reps(&self) -> &[VertexId] {
        &self.rep
    }

    /// True when every vertex is a terminal.
    pub fn is_full(&self) -> bool {
        self.terminals.len() == self.n
    }

    fn adjacency(&self) -> Vec<Vec<(VertexId, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, &(a, b, _)) in self.edges.iter().enumerate() {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        adj
    }

    /// Terminals reachable from `root` without using edge `skip`.
    fn component(&self, root: VertexId, skip: Option<usize>) -> Vec<VertexId> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        seen[root] = true;
        let mut stack = vec![root];
        let mut out = Vec::new();
        while let Some(x) = stack.pop() {
            out.push(x);
            for &(y, id) in &adj[x] {
                if Some(id) != skip && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// `(λ(a, b), a-side of a minimum cut)`: the lightest edge on the tree
    /// path (the one closest to `b` among ties) and the preimage of `a`'s
    /// component once it is removed.
    pub fn query(&self, a: VertexId, b: VertexId) -> Result<(Weight, Cut)> {
        for v in [a, b] {
            if self.terminals.binary_search(&v).is_err() {
                return Err(Error::SourceNotInTerminals(v));
            }
        }
        if a == b {
            return Err(Error::SameEndpoints(a));
        }
        let adj = self.adjacency();
        // parent pointers towards b
        let mut via = vec![usize::MAX; self.n];
        let mut seen = vec![false; self.n];
        seen[b] = true;
        let mut queue = VecDeque::from([b]);
        while let Some(x) = queue.pop_front() {
            for &(y, id) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    via[y] = id;
                    queue.push_back(y);
                }
            }
        }
        let (mut x, mut best) = (a, None::<(Weight, usize)>);
        while x != b {
            let id = via[x];
            let w = self.edges[id].2;
            if best.is_none_or(|(bw, _)| w <= bw) {
                best = Some((w, id));
            }
            let (p, q, _) = self.edges[id];
            x = if p == x { q } else { p };
        }
        let (value, id) = best.unwrap();
        let comp = self.component(a, Some(id));
        let side = (0..self.n).filter(|&v| comp.binary_search(&self.rep[v]).is_ok()).collect();
        Ok((value, Cut { side, value }))
    }

    /// Tree values for all terminal pairs in an `n × n` matrix; entries for
    /// non-terminals and the diagonal hold [`NO_PAIR`].
    pub fn all_pairs(&self) -> Vec<Vec<Weight>> {
        let adj = self.adjacency();
        let mut out = vec![vec![NO_PAIR; self.n]; self.n];
        for &a in &self.terminals {
            let mut stack = vec![(a, usize::MAX, Weight::MAX)];
            while let Some((x, from, low)) = stack.pop() {
                if x != a {
                    out[a][x] = low;
                }
                for &(y, id) in &adj[x] {
                    if y != from {
                        stack.push((y, x, low.min(self.edges[id].2)));
                    }
                }
            }
        }
        out
    }
}

/// Alias for [`GhTree::query`].
pub fn tree_query(t: &GhTree, a: VertexId, b: VertexId) -> Result<(Weight, Cut)> {
    t.query(a, b)
}

/// The classic algorithm: keep a tree of vertex groups, split one group
/// per step with a max-flow in the graph where every other branch of the
/// tree is contracted. Exactly `n - 1` max-flow calls.
pub fn gomory_hu_classic(g: &Graph) -> Result<GhTree> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptySet);
    }
    let mut groups: Vec<Vec<VertexId>> = vec![(0..n).collect()];
    let mut tree: Vec<(usize, usize, Weight)> = Vec::new();
    while let Some(x) = groups.iter().position(|grp| grp.len() >= 2) {
        let (s, t) = (groups[x][0], groups[x][1]);
        let mut adj = vec![Vec::new(); groups.len()];
        for (i, &(a, b, _)) in tree.iter().enumerate() {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        // one block per branch hanging off x
        let mut branch_of = vec![usize::MAX; groups.len()];
        let mut blocks = Vec::new();
        for (j, &(start, _)) in adj[x].iter().enumerate() {
            let mut block = Vec::new();
            let mut stack = vec![start];
            branch_of[start] = j;
            while let Some(y) = stack.pop() {
                block.extend_from_slice(&groups[y]);
                for &(z, _) in &adj[y] {
                    if z != x && branch_of[z] == usize::MAX {
                        branch_of[z] = j;
                        stack.push(z);
                    }
                }
            }
            blocks.push(block);
        }
        let (cg, map) = g.contract(&blocks)?;
        let (value, src) = min_cut(&cg, map.image[s], map.image[t])?;
        let (xs, xt): (Vec<VertexId>, Vec<VertexId>) = groups[x].iter().partition(|&&v| src[map.image[v]]);
        let y = groups.len();
        groups[x] = xs;
        groups.push(xt);
        for &(z, id) in &adj[x] {
            if !src[branch_of[z]] {
                let e = &mut tree[id];
                if e.0 == x {
                    e.0 = y;
                } else {
                    e.1 = y;
                }
            }
        }
        tree.push((x, y, value));
    }
    let edges = tree.iter().map(|&(a, b, w)| (groups[a][0], groups[b][0], w)).collect();
    GhTree::new(n, (0..n).collect(), edges, (0..n).collect())
}

/// Gusfield's variant: `n - 1` max-flows on the original graph, producing
/// a cut tree.
pub fn gusfield(g: &Graph) -> Result<GhTree> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptySet);
    }
    let mut p = vec![0usize; n];
    let mut fl = vec![0 as Weight; n];
    for s in 1..n {
        let t = p[s];
        let (value, side) = min_cut(g, s, t)?;
        fl[s] = value;
        for i in 0..n {
            if i != s && side[i] && p[i] == t {
                p[i] = s;
            }
        }
        if side[p[t]] {
            p[s] = p[t];
            p[t] = s;
            fl[s] = fl[t];
            fl[t] = value;
        }
    }
    let edges = (1..n).map(|i| (i, p[i], fl[i])).collect();
    GhTree::new(n, (0..n).collect(), edges, (0..n).collect())
}

/// Output of [`ghtree_step`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepResult {
    /// Sampling round that produced the parts.
    pub iteration: usize,
    /// Terminals covered by the parts.
    pub d: Vec<VertexId>,
    /// `(v, S_v)`: `S_v` is a minimal `(v, s)`-mincut with at most half
    /// of the terminals; the sides are pairwise disjoint.
    pub parts: Vec<(VertexId, Cut)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FastConfig {
    pub ssmc: SsmcConfig,
    pub seed: u64,
    /// Validate the result and retry with fresh seeds on failure.
    pub validate: bool,
    pub max_retries: usize,
    /// Validate every terminal pair up to this many terminals, sample above.
    pub full_validation_limit: usize,
    /// Compare `λ` across each contraction on a few pairs (slow).
    pub debug_checks: bool,
}

impl Default for FastConfig {
    fn default() -> Self {
        FastConfig {
            ssmc: SsmcConfig::default(),
            seed: 0,
            validate: true,
            max_retries: 3,
            full_validation_limit: 60,
            debug_checks: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FastStats {
    /// Deepest recursion level reached.
    pub depth: usize,
    /// Failed validations that forced a fresh attempt.
    pub retries: usize,
    pub steps: usize,
    /// Pivots abandoned because their step covered no terminal.
    pub repicks: usize,
    /// Sum over steps of `|D| / (|U| - 1)`.
    pub d_fraction_sum: f64,
    /// Terminal pairs whose `λ` changed across a contraction (with
    /// `debug_checks`).
    pub contraction_mismatches: usize,
    /// Flow work of the constructions (validation excluded).
    pub flow: FlowCounters,
}

/// One step: for `⌊lg |U|⌋ + 1` nested random samples `R^i` of the
/// terminals (all containing `s`), isolate each sampled terminal and keep
/// the isolating cuts that are `(s, v)`-mincuts holding at most half of
/// `U`. Returns the round covering the most terminals.
pub fn ghtree_step(g: &Graph, s: VertexId, terminals: &[VertexId], cfg: &FastConfig, seed: u64) -> Result<StepResult> {
    let memo = FlowMemo::new(g);
    let lambda = sstm_no_promise_memo(&memo, terminals, s, &SsmcConfig { seed, ..cfg.ssmc.clone() }, &ExactSsmc)?;
    step_with(g, s, terminals, &lambda, seed)
}

fn step_with(g: &Graph, s: VertexId, terminals: &[VertexId], lambda: &Estimates, seed: u64) -> Result<StepResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 7));
    let mut is_terminal = vec![false; g.n()];
    terminals.iter().for_each(|&t| is_terminal[t] = true);
    let half = terminals.len();
    let mut r: Vec<VertexId> = terminals.to_vec();
    let mut best = StepResult { iteration: 0, d: Vec::new(), parts: Vec::new() };
    let rounds = usize::BITS - terminals.len().leading_zeros();
    for i in 0..rounds as usize {
        if r.len() >= 2 {
            let singles: Vec<Vec<VertexId>> = r.iter().map(|&v| vec![v]).collect();
            let cuts = isolating_cuts(g, &singles)?;
            let mut d = Vec::new();
            let mut parts = Vec::new();
            for (&v, cut) in r.iter().zip(cuts) {
                if v == s {
                    continue;
                }
                let inside: Vec<VertexId> = cut.side.iter().copied().filter(|&x| is_terminal[x]).collect();
                if cut.value == lambda[&v] && 2 * inside.len() <= half {
                    d.extend(inside);
                    parts.push((v, cut));
                }
            }
            if d.len() > best.d.len() {
                d.sort_unstable();
                best = StepResult { iteration: i, d, parts };
            }
        }
        r.retain(|&v| v == s || rng.gen_bool(0.5));
    }
    Ok(best)
}

/// Recursive Gomory-Hu Steiner tree for `terminals`.
pub fn ghtree_fast(g: &Graph, terminals: &[VertexId], cfg: &FastConfig) -> Result<GhTree> {
    ghtree_fast_stats(g, terminals, cfg).map(|(t, _)| t)
}

pub fn ghtree_fast_stats(g: &Graph, terminals: &[VertexId], cfg: &FastConfig) -> Result<(GhTree, FastStats)> {
    cfg.ssmc.check()?;
    let mut u = terminals.to_vec();
    u.sort_unstable();
    u.dedup();
    if u.is_empty() {
        return Err(Error::EmptySet);
    }
    for &t in &u {
        g.check_vertex(t)?;
    }
    let mut builder = Builder { cfg, stats: FastStats::default() };
    let mut last = String::new();
    for attempt in 0..=cfg.max_retries {
        let seed = if attempt == 0 { cfg.seed } else { derive_seed(cfg.seed, 0x5eed + attempt as u64) };
        let before = counters();
        let tree = builder.build(g, &u, seed, 0)?;
        builder.stats.flow = builder.stats.flow + (counters() - before);
        if !cfg.validate {
            return Ok((tree, builder.stats));
        }
        match validate_tiered(g, &tree, cfg.full_validation_limit, seed) {
            Ok(()) => return Ok((tree, builder.stats)),
            Err(v) => {
                last = v.to_string();
                if attempt < cfg.max_retries {
                    builder.stats.retries += 1;
                }
            }
        }
    }
    Err(Error::ValidationFailed { retries: cfg.max_retries, detail: last })
}

struct Builder<'c> {
    cfg: &'c FastConfig,
    stats: FastStats,
}

const MAX_PIVOTS: usize = 32;

impl Builder<'_> {
    fn build(&mut self, g: &Graph, terminals: &[VertexId], seed: u64, depth: usize) -> Result<GhTree> {
        self.stats.depth = self.stats.depth.max(depth);
        if terminals.len() == 1 {
            return Ok(GhTree::single(g.n(), terminals[0]));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let memo = FlowMemo::new(g);
        let mut found = None;
        for attempt in 0..MAX_PIVOTS {
            let s = terminals[rng.gen_range(0..terminals.len())];
            let step_seed = derive_seed(seed, attempt as u64);
            let ssmc = SsmcConfig { seed: step_seed, ..self.cfg.ssmc.clone() };
            let lambda = sstm_no_promise_memo(&memo, terminals, s, &ssmc, &ExactSsmc as &dyn SsmcApprox)?;
            let step = step_with(g, s, terminals, &lambda, step_seed)?;
            self.stats.steps += 1;
            if !step.d.is_empty() {
                self.stats.d_fraction_sum += step.d.len() as f64 / (terminals.len() - 1) as f64;
                found = Some(step);
                break;
            }
            self.stats.repicks += 1;
        }
        let step = found.ok_or(Error::NoProgress(MAX_PIVOTS))?;

        let n = g.n();
        let mut rep = vec![usize::MAX; n];
        let mut edges = Vec::new();
        let mut anchors = Vec::with_capacity(step.parts.len());
        for (j, (_, cut)) in step.parts.iter().enumerate() {
            let mut inside = vec![false; n];
            cut.side.iter().for_each(|&v| inside[v] = true);
            let outside: Vec<VertexId> = (0..n).filter(|&v| !inside[v]).collect();
            let (gv, map) = g.contract(&[outside])?;
            let uv: Vec<VertexId> = terminals.iter().filter(|&&t| inside[t]).map(|&t| map.image[t]).collect();
            self.check_contraction(g, &gv, &map.image, terminals, &inside)?;
            let tv = self.build(&gv, &uv, derive_seed(seed, 2 + j as u64), depth + 1)?;
            let back = |x: VertexId| map.origin[x][0];
            for &v in &cut.side {
                rep[v] = back(tv.rep(map.image[v]));
            }
            edges.extend(tv.edges().iter().map(|&(a, b, w)| (back(a), back(b), w)));
            anchors.push((back(tv.rep(0)), cut.value));
        }
        let blocks: Vec<Vec<VertexId>> = step.parts.iter().map(|(_, cut)| cut.side.clone()).collect();
        let (gl, lmap) = g.contract(&blocks)?;
        let in_d = |t: &VertexId| step.d.binary_search(t).is_ok();
        let ul: Vec<VertexId> = terminals.iter().filter(|t| !in_d(t)).map(|&t| lmap.image[t]).collect();
        let mut outside_parts = vec![true; n];
        blocks.iter().flatten().for_each(|&v| outside_parts[v] = false);
        self.check_contraction(g, &gl, &lmap.image, terminals, &outside_parts)?;
        let tl = self.build(&gl, &ul, derive_seed(seed, 1), depth + 1)?;
        let back = |x: VertexId| lmap.origin[x][0];
        for v in (0..n).filter(|&v| outside_parts[v]) {
            rep[v] = back(tl.rep(lmap.image[v]));
        }
        edges.extend(tl.edges().iter().map(|&(a, b, w)| (back(a), back(b), w)));
        for (j, &(a, w)) in anchors.iter().enumerate() {
            edges.push((a, back(tl.rep(j)), w));
        }
        GhTree::new(n, terminals.to_vec(), edges, rep)
    }

    /// With `debug_checks`, compares `λ` for a few terminal pairs that
    /// survive a contraction uncontracted.
    fn check_contraction(
        &mut self,
        g: &Graph,
        child: &Graph,
        image: &[VertexId],
        terminals: &[VertexId],
        kept: &[bool],
    ) -> Result<()> {
        if !self.cfg.debug_checks {
            return Ok(());
        }
        let inside: Vec<VertexId> = terminals.iter().copied().filter(|&t| kept[t]).collect();
        for pair in inside.windows(2).take(3) {
            let (a, b) = (pair[0], pair[1]);
            if min_cut(g, a, b)?.0 != min_cut(child, image[a], image[b])?.0 {
                self.stats.contraction_mismatches += 1;
            }
        }
        Ok(())
    }
}
