//! Single-source terminal mincuts guided by trees that k-respect the
//! mincuts, and the promise / no-promise solvers built on top.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::derive_seed;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, Weight};
use crate::guide::{GuideTree, Node};
use crate::isolating::isolating_cuts;
use crate::oracles::{max_terminal_mincut, FlowMemo, SsmcApprox};
use crate::packing::{mwu_pack, sample_guide_trees};
use crate::steiner::check_connected;

/// Upper bounds on `λ(s, t)` per terminal; `Weight::MAX` means unknown.
pub type Estimates = BTreeMap<VertexId, Weight>;

fn update(est: &mut Estimates, t: VertexId, x: Weight) {
    let e = est.entry(t).or_insert(Weight::MAX);
    *e = (*e).min(x);
}

fn merge(into: &mut Estimates, from: &Estimates) {
    for (&t, &x) in from {
        update(into, t, x);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SsmcConfig {
    /// Trees with fewer real nodes are solved by direct max-flows.
    pub base_case_size: usize,
    /// Sampling trials per recursion are `⌈trials_factor · ln n⌉`.
    pub trials_factor: f64,
    /// Respect parameter used by the promise solver.
    pub k: usize,
    pub seed: u64,
    /// Guide trees per promise instance are `⌈guide_trees_factor · ln n⌉`.
    pub guide_trees_factor: f64,
    /// Accuracy of the tree packing behind the guide trees.
    pub packing_epsilon: f64,
    /// Check the promise by max-flows before solving (slow; for debugging).
    pub check_promise: bool,
    /// Assert internal invariants by extra max-flows (slow; for debugging).
    pub debug_checks: bool,
}

impl Default for SsmcConfig {
    fn default() -> Self {
        SsmcConfig {
            base_case_size: 10,
            trials_factor: 3.0,
            k: 4,
            seed: 0,
            guide_trees_factor: 1.0,
            packing_epsilon: 0.2,
            check_promise: false,
            debug_checks: false,
        }
    }
}

impl SsmcConfig {
    pub fn check(&self) -> Result<()> {
        if self.base_case_size < 3 {
            return Err(Error::Parameter {
                name: "base_case_size",
                value: self.base_case_size.to_string(),
                expected: "at least 3",
            });
        }
        if self.k < 1 {
            return Err(Error::Parameter { name: "k", value: self.k.to_string(), expected: "at least 1" });
        }
        if self.trials_factor.is_nan() || self.trials_factor <= 0.0 {
            return Err(Error::Parameter {
                name: "trials_factor",
                value: self.trials_factor.to_string(),
                expected: "positive",
            });
        }
        if self.guide_trees_factor.is_nan() || self.guide_trees_factor <= 0.0 {
            return Err(Error::Parameter {
                name: "guide_trees_factor",
                value: self.guide_trees_factor.to_string(),
                expected: "positive",
            });
        }
        Ok(())
    }
}

/// One step-4 split: the instance and the pieces it was cut into.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub n: usize,
    /// Edges with no contracted endpoint.
    pub free_edges: usize,
    /// `(|S_i|, free edges of G_i)` per piece.
    pub parts: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SsmcStats {
    pub calls: usize,
    pub splits: Vec<Split>,
    /// Deepest nesting of step-4 recursions.
    pub split_depth: usize,
    /// Relabelings whose new source changed some `λ` below the maximum
    /// (only counted with `debug_checks`).
    pub relabel_violations: usize,
    /// Subproblems answered from an earlier identical one.
    pub cache_hits: usize,
}

/// One graph of the recursion with its results so far.
struct Scope<'a> {
    memo: &'a FlowMemo<'a>,
    contracted: &'a [bool],
    cache: HashMap<(Vec<Node>, Node, usize), Estimates>,
}

struct Solver<'c> {
    cfg: &'c SsmcConfig,
    rng: ChaCha8Rng,
    stats: SsmcStats,
}

/// Estimates `λ̃(t) ≥ λ(s, t)` for every real `t ≠ s` of `tree`, with
/// equality (w.h.p.) whenever some `(s, t)`-mincut `k`-respects `tree`.
/// The source `s` is the tree's source.
pub fn ssmc_guided(g: &Graph, tree: &GuideTree, k: usize, cfg: &SsmcConfig) -> Result<Estimates> {
    ssmc_guided_stats(g, tree, k, cfg).map(|(est, _)| est)
}

pub fn ssmc_guided_stats(g: &Graph, tree: &GuideTree, k: usize, cfg: &SsmcConfig) -> Result<(Estimates, SsmcStats)> {
    let memo = FlowMemo::new(g);
    let mut solver = Solver::new(cfg, cfg.seed);
    let est = solver.solve(&memo, tree, k)?;
    Ok((est, solver.stats))
}

impl<'c> Solver<'c> {
    fn new(cfg: &'c SsmcConfig, seed: u64) -> Self {
        Solver { cfg, rng: ChaCha8Rng::seed_from_u64(seed), stats: SsmcStats::default() }
    }

    fn solve(&mut self, memo: &FlowMemo, tree: &GuideTree, k: usize) -> Result<Estimates> {
        self.cfg.check()?;
        if k < 1 {
            return Err(Error::Parameter { name: "k", value: k.to_string(), expected: "at least 1" });
        }
        for v in tree.real_vertices() {
            memo.graph().check_vertex(v)?;
        }
        let contracted = vec![false; memo.graph().n()];
        self.run(&mut Scope { memo, contracted: &contracted, cache: HashMap::new() }, tree, k, 0)
    }

    fn run(&mut self, scope: &mut Scope, tree: &GuideTree, k: usize, depth: usize) -> Result<Estimates> {
        // every tree seen in one scope is an induced subtree of the same
        // tree, so its node set identifies it
        let mut nodes = tree.nodes().to_vec();
        nodes.sort_unstable();
        let key = (nodes, tree.node(tree.source()), k);
        if let Some(est) = scope.cache.get(&key) {
            self.stats.cache_hits += 1;
            return Ok(est.clone());
        }
        let est = self.compute(scope, tree, k, depth)?;
        scope.cache.insert(key, est.clone());
        Ok(est)
    }

    fn compute(&mut self, scope: &mut Scope, tree: &GuideTree, k: usize, depth: usize) -> Result<Estimates> {
        let (memo, contracted) = (scope.memo, scope.contracted);
        self.stats.calls += 1;
        self.stats.split_depth = self.stats.split_depth.max(depth);
        let g = memo.graph();
        let s = tree.source_vertex();
        let reals = tree.real_vertices();
        let mut est = Estimates::new();

        // (1) base case
        if reals.len() < self.cfg.base_case_size {
            for &t in reals.iter().filter(|&&t| t != s) {
                update(&mut est, t, memo.lambda(s, t)?);
            }
            return Ok(est);
        }

        // (2) centroid
        let c = tree.centroid();
        let c_real = tree.node(c).real();
        if let Some(cv) = c_real.filter(|&cv| cv != s) {
            update(&mut est, cv, memo.lambda(s, cv)?);
        }

        // (3) isolating cuts for the real sets of the branches at c
        let branches: Vec<(usize, Vec<usize>)> = tree.branches(c);
        let real_of = |nodes: &[usize]| -> Vec<VertexId> {
            let mut r: Vec<VertexId> = nodes.iter().filter_map(|&x| tree.node(x).real()).collect();
            r.sort_unstable();
            r
        };
        let live: Vec<(usize, Vec<usize>, Vec<VertexId>)> = branches
            .iter()
            .map(|(u, nodes)| (*u, nodes.clone(), real_of(nodes)))
            .filter(|(_, _, r)| !r.is_empty())
            .collect();
        let mut sets: Vec<Vec<VertexId>> = live.iter().map(|(_, _, r)| r.clone()).collect();
        if let Some(cv) = c_real {
            sets.push(vec![cv]);
        }
        if sets.len() < 2 {
            for &t in reals.iter().filter(|&&t| t != s) {
                update(&mut est, t, memo.lambda(s, t)?);
            }
            return Ok(est);
        }
        let cuts = isolating_cuts(g, &sets)?;

        // (4) recurse into each branch with the rest of the graph contracted
        let free = |mask: &[bool], graph: &Graph| graph.edges().iter().filter(|e| !mask[e.u] && !mask[e.v]).count();
        let mut split = Split { n: g.n(), free_edges: free(contracted, g), parts: Vec::new() };
        for (i, (u, nodes, branch_reals)) in live.iter().enumerate() {
            let side = &cuts[i].side;
            let mut in_side = vec![false; g.n()];
            side.iter().for_each(|&v| in_side[v] = true);
            let outside: Vec<VertexId> = (0..g.n()).filter(|&v| !in_side[v]).collect();
            let (gi, map) = g.contract(&[outside])?;
            let sub_contracted: Vec<bool> =
                map.origin.iter().enumerate().map(|(x, o)| x == 0 || contracted[o[0]]).collect();
            split.parts.push((side.len(), free(&sub_contracted, &gi)));
            let s_inside = in_side[s];
            let source = s_inside.then(|| tree.position(Node::Real(s)).unwrap());
            let sub_tree = tree.rebuild(
                nodes,
                |node| match node {
                    Node::Real(v) => Node::Real(map.image[v]),
                    fake => fake,
                },
                Node::Real(0),
                *u,
                source,
            );
            let sub_memo = FlowMemo::new(&gi);
            let mut sub_scope = Scope { memo: &sub_memo, contracted: &sub_contracted, cache: HashMap::new() };
            let sub = self.run(&mut sub_scope, &sub_tree, k, depth + 1)?;
            for (&t, &x) in &sub {
                if t != 0 {
                    update(&mut est, map.origin[t][0], x);
                } else if s_inside {
                    // λ'(s, c_i) bounds every terminal outside this branch
                    for &t in reals.iter().filter(|t| branch_reals.binary_search(t).is_err()) {
                        update(&mut est, t, x);
                    }
                }
            }
        }
        self.stats.splits.push(split);
        if k == 1 {
            return Ok(est);
        }

        // (5) sampling trials: drop each branch w.p. 1/2, keeping the one with s
        let s_branch = branches.iter().position(|(_, nodes)| nodes.binary_search(&tree.source()).is_ok());
        let trials = (self.cfg.trials_factor * (g.n().max(2) as f64).ln()).ceil().max(1.0) as usize;
        let optional: Vec<usize> = (0..branches.len()).filter(|&j| Some(j) != s_branch).collect();
        let keep_of = |pick: &dyn Fn(usize) -> bool| {
            let mut keep = vec![c];
            for (j, (_, nodes)) in branches.iter().enumerate() {
                if Some(j) == s_branch || pick(j) {
                    keep.extend_from_slice(nodes);
                }
            }
            keep.sort_unstable();
            keep
        };
        let mut keeps: Vec<Vec<usize>> = Vec::new();
        if optional.len() < usize::BITS as usize && 1usize << optional.len() <= trials {
            // few enough patterns to try them all
            for bits in 0..1usize << optional.len() {
                keeps.push(keep_of(&|j| bits >> optional.iter().position(|&o| o == j).unwrap() & 1 == 1));
            }
        } else {
            let mut tried: HashSet<Vec<usize>> = HashSet::new();
            for _ in 0..4 * trials {
                let draws: Vec<bool> = (0..branches.len()).map(|_| self.rng.gen_bool(0.5)).collect();
                let keep = keep_of(&|j| draws[j]);
                if tried.insert(keep.clone()) {
                    keeps.push(keep);
                    if keeps.len() == trials {
                        break;
                    }
                }
            }
        }
        for keep in keeps {
            let sub_tree = tree.induced(&keep, tree.source());
            let sub = self.run(scope, &sub_tree, k - 1, depth)?;
            merge(&mut est, &sub);
        }

        // (6) move the source to a farthest terminal outside its branch
        if let Some(j) = s_branch {
            let s_nodes = &branches[j].1;
            let s_reals = real_of(s_nodes);
            let others: Vec<VertexId> = reals.iter().copied().filter(|t| s_reals.binary_search(t).is_err()).collect();
            let (lambda_max, argmax) = max_terminal_mincut(memo, &others, s)?;
            for &t in &argmax {
                update(&mut est, t, lambda_max);
            }
            let s2 = argmax[0];
            let keep: Vec<usize> = (0..tree.len()).filter(|x| s_nodes.binary_search(x).is_err()).collect();
            let sub_tree = tree.induced(&keep, tree.position(Node::Real(s2)).unwrap());
            if self.cfg.debug_checks {
                for &t in sub_tree.real_vertices().iter().filter(|&&t| t != s2) {
                    let before = memo.lambda(s, t)?;
                    if before < lambda_max && memo.lambda(s2, t)? != before {
                        self.stats.relabel_violations += 1;
                    }
                }
            }
            let sub = self.run(scope, &sub_tree, k - 1, depth)?;
            for (&t, &x) in &sub {
                if t != s {
                    update(&mut est, t, x);
                }
            }
        }
        Ok(est)
    }
}

fn lambda_direct(memo: &FlowMemo, terminals: &[VertexId], s: VertexId) -> Result<Estimates> {
    terminals.iter().filter(|&&t| t != s).map(|&t| Ok((t, memo.lambda(s, t)?))).collect()
}

fn check_terminals(g: &Graph, terminals: &[VertexId], s: VertexId) -> Result<Vec<VertexId>> {
    let mut u = terminals.to_vec();
    u.sort_unstable();
    u.dedup();
    if u.len() < 2 {
        return Err(Error::TooFewTerminals { need: 2, got: u.len() });
    }
    for &t in &u {
        g.check_vertex(t)?;
    }
    if u.binary_search(&s).is_err() {
        return Err(Error::SourceNotInTerminals(s));
    }
    Ok(u)
}

/// `λ(s, t)` for every terminal `t ≠ s`, assuming
/// `λ(U) ≤ λ(s, t) ≤ 1.1·λ(U)` for all of them. Correct w.h.p.
pub fn sstm_promise(g: &Graph, terminals: &[VertexId], s: VertexId, cfg: &SsmcConfig) -> Result<Estimates> {
    sstm_promise_memo(&FlowMemo::new(g), terminals, s, cfg)
}

pub(crate) fn sstm_promise_memo(
    memo: &FlowMemo,
    terminals: &[VertexId],
    s: VertexId,
    cfg: &SsmcConfig,
) -> Result<Estimates> {
    cfg.check()?;
    let g = memo.graph();
    let u = check_terminals(g, terminals, s)?;
    if cfg.check_promise {
        verify_promise(memo, &u, s)?;
    }
    // every tree leads straight to the base case
    if u.len() < cfg.base_case_size {
        return lambda_direct(memo, &u, s);
    }
    // terminals outside the component of s have λ = 0
    let (_, comp) = g.components();
    let (near, far): (Vec<VertexId>, Vec<VertexId>) = u.iter().partition(|&&t| comp[t] == comp[s]);
    let mut est: Estimates = far.iter().map(|&t| (t, 0)).collect();
    if near.len() < cfg.base_case_size {
        merge(&mut est, &lambda_direct(memo, &near, s)?);
        return Ok(est);
    }
    check_connected(g, &near)?;
    let packing = mwu_pack(g, &near, cfg.packing_epsilon)?;
    let count = (cfg.guide_trees_factor * (g.n().max(2) as f64).ln()).ceil().max(1.0) as usize;
    let mut trees = sample_guide_trees(g, &packing, s, count, derive_seed(cfg.seed, 1))?;
    trees.sort_by_key(|t| t.edges());
    trees.dedup();
    for (i, tree) in trees.iter().enumerate() {
        let mut solver = Solver::new(cfg, derive_seed(cfg.seed, 2 + i as u64));
        let sub = solver.solve(memo, tree, cfg.k)?;
        merge(&mut est, &sub);
    }
    Ok(est)
}

/// Checks `λ(s, t) ≤ 1.1·λ(U)` for every terminal by max-flows.
pub fn verify_promise(memo: &FlowMemo, terminals: &[VertexId], s: VertexId) -> Result<()> {
    let values = lambda_direct(memo, terminals, s)?;
    let lo = values.values().copied().min().unwrap_or(0);
    let lo = terminals
        .iter()
        .flat_map(|&a| terminals.iter().map(move |&b| (a, b)))
        .filter(|(a, b)| a < b)
        .try_fold(lo, |acc, (a, b)| memo.lambda(a, b).map(|x| acc.min(x)))?;
    for (&t, &x) in &values {
        if x as f64 > 1.1 * lo as f64 {
            return Err(Error::PromiseViolated { terminal: t, value: x, lo });
        }
    }
    Ok(())
}

/// Bucket width of the promise removal.
pub const BUCKET_EPSILON: f64 = 0.01;

/// Index `i` with `(1+ε)^i ≤ x < (1+ε)^{i+1}`, for `x ≥ 1`.
pub fn bucket_of(x: Weight) -> i64 {
    let base = 1.0 + BUCKET_EPSILON;
    let xf = x as f64;
    let mut i = (xf.ln() / base.ln()).floor() as i64;
    while base.powi(i as i32 + 1) <= xf {
        i += 1;
    }
    while base.powi(i as i32) > xf {
        i -= 1;
    }
    i
}

/// `λ(s, t)` for every terminal `t ≠ s`, with no promise on the values:
/// terminals are grouped by approximate value into buckets narrow enough
/// for the promise, and each bucket is solved separately.
pub fn sstm_no_promise(
    g: &Graph,
    terminals: &[VertexId],
    s: VertexId,
    cfg: &SsmcConfig,
    approx: &dyn SsmcApprox,
) -> Result<Estimates> {
    sstm_no_promise_memo(&FlowMemo::new(g), terminals, s, cfg, approx)
}

pub(crate) fn sstm_no_promise_memo(
    memo: &FlowMemo,
    terminals: &[VertexId],
    s: VertexId,
    cfg: &SsmcConfig,
    approx: &dyn SsmcApprox,
) -> Result<Estimates> {
    cfg.check()?;
    let g = memo.graph();
    let u = check_terminals(g, terminals, s)?;
    let rough = approx.estimate(g, s)?;
    let exact = approx.epsilon() == 0.0;
    let mut est = Estimates::new();
    let mut buckets: BTreeMap<i64, Vec<VertexId>> = BTreeMap::new();
    for &t in u.iter().filter(|&&t| t != s) {
        let x = rough[&t];
        if exact {
            memo.remember(s, t, x);
        }
        if x == 0 {
            // any estimate within a factor of λ is 0 exactly when λ is
            est.insert(t, 0);
        } else {
            buckets.entry(bucket_of(x)).or_default().push(t);
        }
    }
    for (i, (_, mut members)) in buckets.into_iter().enumerate() {
        members.push(s);
        let sub_cfg = SsmcConfig { seed: derive_seed(cfg.seed, 1000 + i as u64), ..cfg.clone() };
        merge(&mut est, &sstm_promise_memo(memo, &members, s, &sub_cfg)?);
    }
    Ok(est)
}
