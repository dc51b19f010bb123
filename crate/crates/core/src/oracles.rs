//! Cut-threshold queries, the max-finder built on them, Steiner mincut
//! values, and single-source mincut estimates.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, Weight};
use crate::maxflow::min_cut;

/// Memoized `λ(a, b)` values on one graph.
#[derive(Debug)]
pub struct FlowMemo<'g> {
    g: &'g Graph,
    values: Mutex<HashMap<(VertexId, VertexId), Weight>>,
}

impl<'g> FlowMemo<'g> {
    pub fn new(g: &'g Graph) -> Self {
        FlowMemo { g, values: Mutex::new(HashMap::new()) }
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    pub fn lambda(&self, a: VertexId, b: VertexId) -> Result<Weight> {
        let key = (a.min(b), a.max(b));
        if let Some(&v) = self.values.lock().unwrap().get(&key) {
            return Ok(v);
        }
        let v = min_cut(self.g, a, b)?.0;
        self.values.lock().unwrap().insert(key, v);
        Ok(v)
    }

    /// Records a value obtained elsewhere (e.g. from a cut that is known
    /// to be minimum).
    pub fn remember(&self, a: VertexId, b: VertexId, value: Weight) {
        self.values.lock().unwrap().insert((a.min(b), a.max(b)), value);
    }
}

/// Answers "which vertices have `λ(s, v) ≤ bar`".
pub trait CutThreshold {
    fn graph(&self) -> &Graph;

    /// Exactly `{ v ≠ s : λ(s, v) ≤ bar }`, sorted.
    fn threshold(&self, s: VertexId, bar: Weight) -> Result<Vec<VertexId>>;

    /// The threshold set intersected with `candidates`, sorted.
    fn threshold_within(&self, s: VertexId, bar: Weight, candidates: &[VertexId]) -> Result<Vec<VertexId>> {
        let all = self.threshold(s, bar)?;
        let mut out: Vec<VertexId> = candidates.iter().copied().filter(|v| all.binary_search(v).is_ok()).collect();
        out.sort_unstable();
        Ok(out)
    }
}

/// Cut-threshold by one memoized max-flow per queried vertex.
pub type NaiveThreshold<'g> = FlowMemo<'g>;

impl CutThreshold for FlowMemo<'_> {
    fn graph(&self) -> &Graph {
        self.g
    }

    fn threshold(&self, s: VertexId, bar: Weight) -> Result<Vec<VertexId>> {
        let all: Vec<VertexId> = (0..self.graph().n()).collect();
        self.threshold_within(s, bar, &all)
    }

    fn threshold_within(&self, s: VertexId, bar: Weight, candidates: &[VertexId]) -> Result<Vec<VertexId>> {
        self.graph().check_vertex(s)?;
        let mut out = Vec::new();
        for &v in candidates {
            if v != s && self.lambda(s, v)? <= bar {
                out.push(v);
            }
        }
        out.sort_unstable();
        Ok(out)
    }
}

/// `λ_max = max_{t ∈ terminals} λ(s, t)` and every terminal attaining it,
/// by binary search over threshold queries on `[0, m·W]`.
pub fn max_terminal_mincut(
    o: &dyn CutThreshold,
    terminals: &[VertexId],
    s: VertexId,
) -> Result<(Weight, Vec<VertexId>)> {
    if terminals.is_empty() {
        return Err(Error::EmptySet);
    }
    let g = o.graph();
    g.check_vertex(s)?;
    for &t in terminals {
        g.check_vertex(t)?;
        if t == s {
            return Err(Error::Overlap(s));
        }
    }
    let mut sorted = terminals.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    // smallest bar whose threshold set covers every terminal
    let (mut lo, mut hi) = (0, g.m() as Weight * g.max_weight());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if o.threshold_within(s, mid, &sorted)?.len() == sorted.len() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let argmax = if lo == 0 {
        sorted
    } else {
        let below = o.threshold_within(s, lo - 1, &sorted)?;
        sorted.into_iter().filter(|v| below.binary_search(v).is_err()).collect()
    };
    Ok((lo, argmax))
}

/// `λ(U) = min_{a,b ∈ U} λ(a, b)`, from the flows of the first terminal.
pub fn steiner_mincut(g: &Graph, terminals: &[VertexId]) -> Result<Weight> {
    if terminals.len() < 2 {
        return Err(Error::TooFewTerminals { need: 2, got: terminals.len() });
    }
    let s0 = terminals[0];
    let mut best = Weight::MAX;
    for &t in &terminals[1..] {
        if t != s0 {
            best = best.min(min_cut(g, s0, t)?.0);
        }
    }
    Ok(best)
}

/// Single-source mincut estimates within a factor `1 + epsilon`.
pub trait SsmcApprox {
    fn epsilon(&self) -> f64;
    /// Estimates for every `v ≠ s`.
    fn estimate(&self, g: &Graph, s: VertexId) -> Result<BTreeMap<VertexId, Weight>>;
}

/// Exact estimates: one max-flow per vertex.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactSsmc;

impl SsmcApprox for ExactSsmc {
    fn epsilon(&self) -> f64 {
        0.0
    }

    fn estimate(&self, g: &Graph, s: VertexId) -> Result<BTreeMap<VertexId, Weight>> {
        g.check_vertex(s)?;
        (0..g.n()).filter(|&v| v != s).map(|v| Ok((v, min_cut(g, s, v)?.0))).collect()
    }
}

pub fn approx_single_source_mincuts(o: &dyn SsmcApprox, g: &Graph, s: VertexId) -> Result<BTreeMap<VertexId, Weight>> {
    o.estimate(g, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxflow::max_flow;
    use crate::verify::{apmf_bruteforce, brute_min_cut};
    use proptest::prelude::*;

    fn p3() -> Graph {
        Graph::build(3, &[(0, 1, 3), (1, 2, 5)]).unwrap()
    }

    #[test]
    fn threshold_on_weighted_path() {
        let g = p3();
        let o = NaiveThreshold::new(&g);
        // brute force: λ(0,1) = λ(0,2) = 3
        assert_eq!(brute_min_cut(&g, &[0], &[1]).0, 3);
        assert_eq!(brute_min_cut(&g, &[0], &[2]).0, 3);
        assert_eq!(o.threshold(0, 3).unwrap(), vec![1, 2]);
        assert_eq!(o.threshold(0, 2).unwrap(), Vec::<usize>::new());
        assert_eq!(o.threshold(0, g.m() as u64 * DEFAULT_W).unwrap(), vec![1, 2]);
    }

    const DEFAULT_W: u64 = crate::graph::DEFAULT_MAX_WEIGHT;

    #[test]
    fn max_finder_examples() {
        let g = p3();
        let o = NaiveThreshold::new(&g);
        assert_eq!(brute_min_cut(&g, &[2], &[1]).0, 5);
        assert_eq!(max_terminal_mincut(&o, &[0, 1], 2).unwrap(), (5, vec![1]));
        assert_eq!(max_terminal_mincut(&o, &[0], 2).unwrap(), (3, vec![0]));
        let star = Graph::build(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]).unwrap();
        let o = NaiveThreshold::new(&star);
        assert_eq!(max_terminal_mincut(&o, &[1, 2, 3], 0).unwrap(), (1, vec![1, 2, 3]));
        assert_eq!(max_terminal_mincut(&o, &[], 0).unwrap_err(), Error::EmptySet);
    }

    #[test]
    fn max_finder_with_zero_values() {
        let g = Graph::build(4, &[(0, 1, 2)]).unwrap();
        let o = NaiveThreshold::new(&g);
        assert_eq!(max_terminal_mincut(&o, &[2, 3], 0).unwrap(), (0, vec![2, 3]));
        assert_eq!(max_terminal_mincut(&o, &[1, 3], 0).unwrap(), (2, vec![1]));
    }

    #[test]
    fn steiner_mincut_examples() {
        let k4 = Graph::build(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)]).unwrap();
        assert_eq!(steiner_mincut(&k4, &[0, 1, 2, 3]).unwrap(), 3);
        let p4 = Graph::build(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        assert_eq!(steiner_mincut(&p4, &[0, 3]).unwrap(), 1);
        let c4 = Graph::build(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]).unwrap();
        let apmf = apmf_bruteforce(&c4);
        let brute = (0..4).flat_map(|a| (0..4).filter(move |&b| b != a).map(move |b| (a, b)));
        let expect = brute.map(|(a, b)| apmf[a][b]).min().unwrap();
        assert_eq!(expect, 2);
        assert_eq!(steiner_mincut(&c4, &[0, 1, 2, 3]).unwrap(), 2);
        assert!(steiner_mincut(&c4, &[0]).is_err());
    }

    #[test]
    fn exact_estimates() {
        let g = p3();
        let est = approx_single_source_mincuts(&ExactSsmc, &g, 0).unwrap();
        assert_eq!(est, BTreeMap::from([(1, 3), (2, 3)]));
        let pair = Graph::build(2, &[]).unwrap();
        assert_eq!(ExactSsmc.estimate(&pair, 0).unwrap(), BTreeMap::from([(1, 0)]));
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize, i64)>)> {
        (2..max_n).prop_flat_map(|n| {
            let e = (0..n, 0..n, 1i64..10);
            (Just(n), prop::collection::vec(e, 0..3 * n))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn threshold_monotone((n, raw) in arb_graph(12), s in 0usize..12, a in 0u64..40, b in 0u64..40) {
            let s = s % n;
            let g = Graph::build(n, &raw).unwrap();
            let o = NaiveThreshold::new(&g);
            let (lo, hi) = (a.min(b), a.max(b));
            let small = o.threshold(s, lo).unwrap();
            let large = o.threshold(s, hi).unwrap();
            prop_assert!(small.iter().all(|v| large.binary_search(v).is_ok()));
        }

        #[test]
        fn max_finder_matches_direct((n, raw) in arb_graph(30), s in 0usize..30, mask in any::<u32>()) {
            let s = s % n;
            let g = Graph::build(n, &raw).unwrap();
            let terms: Vec<usize> = (0..n).filter(|&v| v != s && mask >> v & 1 == 1).collect();
            prop_assume!(!terms.is_empty());
            let values: Vec<u64> = terms.iter().map(|&t| max_flow(&g, s, t).unwrap().value).collect();
            let best = *values.iter().max().unwrap();
            let argmax: Vec<usize> = terms.iter().zip(&values).filter(|&(_, &v)| v == best).map(|(&t, _)| t).collect();
            let o = NaiveThreshold::new(&g);
            prop_assert_eq!(max_terminal_mincut(&o, &terms, s).unwrap(), (best, argmax));
        }

        #[test]
        fn exact_estimates_sandwich((n, raw) in arb_graph(10), s in 0usize..10) {
            let s = s % n;
            let g = Graph::build(n, &raw).unwrap();
            let o = ExactSsmc;
            for (v, est) in o.estimate(&g, s).unwrap() {
                let exact = brute_min_cut(&g, &[s], &[v]).0 as f64;
                let e = est as f64;
                prop_assert!(exact / (1.0 + o.epsilon()) <= e && e <= (1.0 + o.epsilon()) * exact);
            }
        }
    }
}
