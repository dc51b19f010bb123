//! Ground-truth oracles and validators. These favor obviousness over speed.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ghtree::GhTree;
use crate::graph::{vec_to_mask, EdgeId, Graph, VertexId, Weight};
use crate::guide::{GuideTree, Node};
use crate::maxflow::max_flow;

/// Diagonal entry of [`apmf_bruteforce`].
pub const NO_PAIR: Weight = Weight::MAX;

/// `λ(a, b)` for every pair, one max-flow each.
pub fn apmf_bruteforce(g: &Graph) -> Vec<Vec<Weight>> {
    let n = g.n();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let values: Vec<Weight> = pairs.par_iter().map(|&(a, b)| max_flow(g, a, b).unwrap().value).collect();
    let mut out = vec![vec![NO_PAIR; n]; n];
    for (&(a, b), &v) in pairs.iter().zip(&values) {
        out[a][b] = v;
        out[b][a] = v;
    }
    out
}

/// Minimum `(sources, sinks)`-cut by enumerating every side, together with
/// the vertex-minimal optimal side (the intersection of all optimal sides).
pub fn brute_min_cut(g: &Graph, sources: &[VertexId], sinks: &[VertexId]) -> (Weight, Vec<VertexId>) {
    let n = g.n();
    let mut fixed = vec![None; n];
    for &v in sources {
        fixed[v] = Some(true);
    }
    for &v in sinks {
        assert!(fixed[v] != Some(true), "vertex {v} is both source and sink");
        fixed[v] = Some(false);
    }
    let free: Vec<usize> = (0..n).filter(|&v| fixed[v].is_none()).collect();
    assert!(free.len() <= 24, "brute force over {} free vertices", free.len());
    let mut best = Weight::MAX;
    let mut inter = vec![true; n];
    let mut mask: Vec<bool> = fixed.iter().map(|f| f == &Some(true)).collect();
    for bits in 0u64..1 << free.len() {
        for (i, &v) in free.iter().enumerate() {
            mask[v] = bits >> i & 1 == 1;
        }
        let value = g.cut_value_mask(&mask);
        if value < best {
            best = value;
            inter.clone_from(&mask);
        } else if value == best {
            inter.iter_mut().zip(&mask).for_each(|(a, &b)| *a &= b);
        }
    }
    (best, (0..n).filter(|&v| inter[v]).collect())
}

/// A pair on which a tree disagrees with the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub a: VertexId,
    pub b: VertexId,
    /// `λ_G(a, b)`.
    pub expected: Weight,
    /// Value reported by the tree.
    pub got: Weight,
    /// Cut value in `G` of the side reported by the tree.
    pub side_value: Weight,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "pair ({}, {}): lambda = {}, tree says {}, tree cut has value {}",
            self.a, self.b, self.expected, self.got, self.side_value
        )
    }
}

fn check_pair(g: &Graph, t: &GhTree, a: VertexId, b: VertexId, expected: Weight) -> Option<Violation> {
    let (got, cut) = t.query(a, b).ok()?;
    let mask = vec_to_mask(g.n(), &cut.side);
    let side_value = if mask[a] && !mask[b] { g.cut_value_mask(&mask) } else { Weight::MAX };
    (got != expected || side_value != got).then_some(Violation { a, b, expected, got, side_value })
}

fn terminal_pairs(t: &GhTree) -> Vec<(VertexId, VertexId)> {
    let u = t.terminals();
    (0..u.len()).flat_map(|i| (i + 1..u.len()).map(move |j| (u[i], u[j]))).collect()
}

/// Checks every terminal pair: the tree value equals `λ_G` and the tree's
/// cut side has that value in `G`. Returns the first violation.
pub fn validate_ghtree(g: &Graph, t: &GhTree) -> std::result::Result<(), Violation> {
    check_structure(g, t)?;
    let found: Vec<Option<Violation>> =
        terminal_pairs(t).par_iter().map(|&(a, b)| check_pair(g, t, a, b, max_flow(g, a, b).unwrap().value)).collect();
    found.into_iter().flatten().next().map_or(Ok(()), Err)
}

/// As [`validate_ghtree`], with `λ` taken from a precomputed matrix.
pub fn validate_against(g: &Graph, t: &GhTree, apmf: &[Vec<Weight>]) -> std::result::Result<(), Violation> {
    check_structure(g, t)?;
    let found: Vec<Option<Violation>> =
        terminal_pairs(t).par_iter().map(|&(a, b)| check_pair(g, t, a, b, apmf[a][b])).collect();
    found.into_iter().flatten().next().map_or(Ok(()), Err)
}

/// As [`validate_ghtree`] on `samples` random terminal pairs.
pub fn spot_check(g: &Graph, t: &GhTree, samples: usize, seed: u64) -> std::result::Result<(), Violation> {
    check_structure(g, t)?;
    let mut pairs = terminal_pairs(t);
    pairs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    pairs.truncate(samples);
    let found: Vec<Option<Violation>> =
        pairs.par_iter().map(|&(a, b)| check_pair(g, t, a, b, max_flow(g, a, b).unwrap().value)).collect();
    found.into_iter().flatten().next().map_or(Ok(()), Err)
}

/// Full validation up to `full_limit` terminals, spot checks above.
pub fn validate_tiered(g: &Graph, t: &GhTree, full_limit: usize, seed: u64) -> std::result::Result<(), Violation> {
    if t.terminals().len() <= full_limit {
        validate_ghtree(g, t)
    } else {
        spot_check(g, t, 4 * t.terminals().len(), seed)
    }
}

fn check_structure(g: &Graph, t: &GhTree) -> std::result::Result<(), Violation> {
    let bad = Violation { a: 0, b: 0, expected: 0, got: 0, side_value: 0 };
    if t.n() != g.n() || t.terminals().iter().any(|&u| u >= g.n()) {
        return Err(bad);
    }
    Ok(())
}

/// Outcome of [`check_k_respecting`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Respect {
    pub respects: bool,
    /// Fewest tree edges cut over all fake-node placements.
    pub crossing: usize,
    /// A placement attaining `crossing`: `(fake id, joins side)`.
    pub fake_sides: Vec<(usize, bool)>,
}

/// Whether some placement of fake nodes makes at most `k` edges of `tree`
/// cross `side`. Real nodes are placed by membership in `side`.
pub fn check_k_respecting(tree: &GuideTree, side: &[VertexId], k: usize) -> Respect {
    let len = tree.len();
    let in_side = |v: VertexId| side.contains(&v);
    // post-order from node 0
    let mut parent = vec![usize::MAX; len];
    let mut order = Vec::with_capacity(len);
    let mut stack = vec![0];
    let mut seen = vec![false; len];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in tree.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    const INF: usize = usize::MAX / 4;
    // cost[x][b]: fewest cut edges inside x's subtree with x on side b
    let mut cost = vec![[0usize; 2]; len];
    for &x in order.iter().rev() {
        for b in 0..2 {
            let allowed = match tree.node(x) {
                Node::Real(v) => in_side(v) == (b == 1),
                Node::Fake(_) => true,
            };
            if !allowed {
                cost[x][b] = INF;
                continue;
            }
            cost[x][b] = tree
                .neighbors(x)
                .iter()
                .filter(|&&y| parent[y] == x)
                .map(|&y| cost[y][b].min(cost[y][1 - b] + 1))
                .sum();
        }
    }
    let mut place = vec![0usize; len];
    place[0] = if cost[0][1] < cost[0][0] { 1 } else { 0 };
    for &x in &order {
        if x == 0 {
            continue;
        }
        let b = place[parent[x]];
        place[x] = if cost[x][b] <= cost[x][1 - b] + 1 { b } else { 1 - b };
    }
    let crossing = cost[0][0].min(cost[0][1]);
    let mut fake_sides: Vec<(usize, bool)> = (0..len)
        .filter_map(|x| match tree.node(x) {
            Node::Fake(id) => Some((id, place[x] == 1)),
            Node::Real(_) => None,
        })
        .collect();
    fake_sides.sort_unstable();
    Respect { respects: crossing <= k, crossing, fake_sides }
}

/// Tree edges crossing a full placement (`node -> side`).
pub fn crossing_edges(tree: &GuideTree, place: impl Fn(Node) -> bool) -> usize {
    tree.edges().iter().filter(|&&(a, b)| place(tree.node(a)) != place(tree.node(b))).count()
}

/// Exact minimum Steiner tree length by enumerating vertex supersets of
/// the terminals and taking a minimum spanning tree of each.
pub fn brute_min_steiner_tree(g: &Graph, lengths: &[f64], terminals: &[VertexId]) -> Result<(f64, Vec<EdgeId>)> {
    let n = g.n();
    if n > 14 || terminals.len() > 6 {
        return Err(Error::Budget(format!("n = {n}, |U| = {} exceeds 14 / 6", terminals.len())));
    }
    if terminals.len() < 2 {
        return Err(Error::TooFewTerminals { need: 2, got: terminals.len() });
    }
    let required = terminals.iter().fold(0u32, |acc, &t| acc | 1 << t);
    let mut order: Vec<EdgeId> = (0..g.m()).collect();
    order.sort_by(|&a, &b| lengths[a].total_cmp(&lengths[b]).then(a.cmp(&b)));
    let mut best: Option<(f64, Vec<EdgeId>)> = None;
    for set in 0u32..1 << n {
        if set & required != required {
            continue;
        }
        let mut dsu: Vec<usize> = (0..n).collect();
        fn find(d: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while d[r] != r {
                r = d[r];
            }
            d[x] = r;
            r
        }
        let mut chosen = Vec::new();
        let mut total = 0.0;
        for &id in &order {
            let e = g.edge(id);
            if set >> e.u & 1 == 0 || set >> e.v & 1 == 0 {
                continue;
            }
            let (a, b) = (find(&mut dsu, e.u), find(&mut dsu, e.v));
            if a != b {
                dsu[a] = b;
                chosen.push(id);
                total += lengths[id];
            }
        }
        let root = find(&mut dsu, terminals[0]);
        let spanning = (0..n).filter(|&v| set >> v & 1 == 1).all(|v| find(&mut dsu, v) == root);
        if spanning && best.as_ref().is_none_or(|(b, _)| total < *b) {
            chosen.sort_unstable();
            best = Some((total, chosen));
        }
    }
    best.ok_or_else(|| {
        let (_, comp) = g.components();
        Error::DisconnectedTerminals {
            anchor: terminals[0],
            unreachable: terminals.iter().copied().filter(|&t| comp[t] != comp[terminals[0]]).collect(),
        }
    })
}

/// `λ(a, c) ≥ min(λ(a, b), λ(b, c))` for every triple.
pub fn mincut_triangle_holds(apmf: &[Vec<Weight>]) -> bool {
    let n = apmf.len();
    (0..n)
        .all(|a| (0..n).all(|b| (0..n).all(|c| a == b || b == c || a == c || apmf[a][c] >= apmf[a][b].min(apmf[b][c]))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Cut;
    use proptest::prelude::*;

    #[test]
    fn apmf_examples() {
        let g = Graph::build(3, &[(0, 1, 3), (1, 2, 5)]).unwrap();
        let m = apmf_bruteforce(&g);
        assert_eq!(m, vec![vec![NO_PAIR, 3, 3], vec![3, NO_PAIR, 5], vec![3, 5, NO_PAIR]]);
        let pair = Graph::build(2, &[]).unwrap();
        assert_eq!(apmf_bruteforce(&pair)[0][1], 0);
        let k4 = Graph::build(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)]).unwrap();
        let m = apmf_bruteforce(&k4);
        assert!((0..4).all(|a| (0..4).all(|b| a == b || m[a][b] == 3)));
    }

    #[test]
    fn brute_cut_minimal_side() {
        let g = Graph::build(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        assert_eq!(brute_min_cut(&g, &[0], &[3]), (1, vec![0]));
        assert_eq!(brute_min_cut(&g, &[0, 1], &[3]), (1, vec![0, 1]));
    }

    #[test]
    fn validates_path_tree_and_catches_fault() {
        let g = Graph::build(3, &[(0, 1, 3), (1, 2, 5)]).unwrap();
        let t = GhTree::new(3, vec![0, 1, 2], vec![(0, 1, 3), (1, 2, 5)], vec![0, 1, 2]).unwrap();
        assert_eq!(validate_ghtree(&g, &t), Ok(()));
        let bad = GhTree::new(3, vec![0, 1, 2], vec![(0, 1, 3), (1, 2, 99)], vec![0, 1, 2]).unwrap();
        let v = validate_ghtree(&g, &bad).unwrap_err();
        assert_eq!((v.a, v.b, v.expected, v.got), (1, 2, 5, 99));
    }

    #[test]
    fn k_respecting_examples() {
        let path = GuideTree::from_vertex_edges(&[(0, 1), (1, 2)], 0).unwrap();
        let r = check_k_respecting(&path, &[0], 1);
        assert_eq!(r, Respect { respects: true, crossing: 1, fake_sides: vec![] });

        let nodes = vec![Node::Fake(7), Node::Real(0), Node::Real(1), Node::Real(2), Node::Real(3)];
        let star = GuideTree::new(nodes, &[(0, 1), (0, 2), (0, 3), (0, 4)], 1).unwrap();
        let r = check_k_respecting(&star, &[0, 1], 2);
        assert!(r.respects);
        assert_eq!(r.crossing, 2);
        assert_eq!(r.fake_sides.len(), 1);

        let real = GuideTree::from_vertex_edges(&[(0, 1), (0, 2), (0, 3), (0, 4)], 0).unwrap();
        let r = check_k_respecting(&real, &[1, 2], 1);
        assert_eq!(r, Respect { respects: false, crossing: 2, fake_sides: vec![] });
    }

    #[test]
    fn steiner_oracle_examples() {
        let p3 = Graph::build(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        assert_eq!(brute_min_steiner_tree(&p3, &[1.0, 1.0], &[0, 2]).unwrap(), (2.0, vec![0, 1]));
        let c4 = Graph::build(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)]).unwrap();
        let (len, edges) = brute_min_steiner_tree(&c4, &[1.0; 4], &[0, 1, 2, 3]).unwrap();
        assert_eq!((len, edges.len()), (3.0, 3));
        let sq = Graph::build(4, &[(0, 1, 1), (1, 2, 1), (0, 3, 1), (3, 2, 1)]).unwrap();
        // the route through 3 is cheaper
        let lengths: Vec<f64> = sq.edges().iter().map(|e| if e.u == 3 || e.v == 3 { 0.5 } else { 1.0 }).collect();
        let (len, _) = brute_min_steiner_tree(&sq, &lengths, &[0, 2]).unwrap();
        assert_eq!(len, 1.0);
        let big = Graph::build(15, &[]).unwrap();
        assert!(matches!(brute_min_steiner_tree(&big, &[], &[0, 1]), Err(Error::Budget(_))));
    }

    #[test]
    fn cut_side_roundtrip() {
        let g = Graph::build(3, &[(0, 1, 3), (1, 2, 5)]).unwrap();
        let t = GhTree::new(3, vec![0, 1, 2], vec![(0, 1, 3), (1, 2, 5)], vec![0, 1, 2]).unwrap();
        let (value, cut) = t.query(0, 2).unwrap();
        assert_eq!((value, &cut), (3, &Cut { side: vec![0], value: 3 }));
        assert_eq!(g.cut_value(&cut.side).unwrap(), value);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize, i64)>)> {
        (2..max_n).prop_flat_map(|n| {
            let e = (0..n, 0..n, 1i64..6);
            (Just(n), prop::collection::vec(e, 0..3 * n))
        })
    }

    fn arb_guide() -> impl Strategy<Value = (Vec<Node>, Vec<(usize, usize)>, u32)> {
        (2usize..16).prop_flat_map(|len| {
            (
                prop::collection::vec(any::<bool>(), len),
                prop::collection::vec(any::<prop::sample::Index>(), len),
                any::<u32>(),
            )
                .prop_map(move |(fake, parents, side)| {
                    // node 0 is always real; at most 12 fake nodes
                    let mut fakes = 0;
                    let nodes = (0..len)
                        .map(|i| {
                            if i > 0 && fake[i] && fakes < 12 {
                                fakes += 1;
                                Node::Fake(100 + i)
                            } else {
                                Node::Real(i)
                            }
                        })
                        .collect();
                    let edges = (1..len).map(|i| (parents[i].index(i), i)).collect();
                    (nodes, edges, side)
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn triangle_property((n, raw) in arb_graph(9)) {
            let g = Graph::build(n, &raw).unwrap();
            prop_assert!(mincut_triangle_holds(&apmf_bruteforce(&g)));
        }

        #[test]
        fn respect_dp_matches_enumeration((nodes, edges, side) in arb_guide()) {
            let tree = GuideTree::new(nodes.clone(), &edges, 0).unwrap();
            let in_side: Vec<usize> = nodes.iter().filter_map(|n| n.real()).filter(|&v| side >> v & 1 == 1).collect();
            let fakes: Vec<usize> = nodes.iter().filter_map(|n| match n { Node::Fake(id) => Some(*id), _ => None }).collect();
            let mut best = usize::MAX;
            for bits in 0u32..1 << fakes.len() {
                let c = crossing_edges(&tree, |node| match node {
                    Node::Real(v) => side >> v & 1 == 1,
                    Node::Fake(id) => bits >> fakes.iter().position(|&f| f == id).unwrap() & 1 == 1,
                });
                best = best.min(c);
            }
            let r = check_k_respecting(&tree, &in_side, 2);
            prop_assert_eq!(r.crossing, best);
            prop_assert_eq!(r.respects, best <= 2);
            let witness = crossing_edges(&tree, |node| match node {
                Node::Real(v) => side >> v & 1 == 1,
                Node::Fake(id) => r.fake_sides.iter().find(|f| f.0 == id).unwrap().1,
            });
            prop_assert_eq!(witness, best);
        }

        // An (X, U∖X)-mincut for X ⊆ X' can be found inside an (X', U∖X')-mincut.
        #[test]
        fn uncrossing_on_brute_force((n, raw) in arb_graph(11), u_bits in any::<u16>(), x_bits in any::<u16>(), extra in any::<u16>()) {
            let g = Graph::build(n, &raw).unwrap();
            let u: Vec<usize> = (0..n).filter(|&v| u_bits >> v & 1 == 1).collect();
            let x: Vec<usize> = u.iter().copied().filter(|&v| x_bits >> v & 1 == 1).collect();
            let x2: Vec<usize> = u.iter().copied().filter(|&v| (x_bits | extra) >> v & 1 == 1).collect();
            let rest = |s: &[usize]| -> Vec<usize> { u.iter().copied().filter(|v| !s.contains(v)).collect() };
            prop_assume!(!x.is_empty() && !rest(&x2).is_empty());
            let (val, _) = brute_min_cut(&g, &x, &rest(&x));
            let (_, outer) = brute_min_cut(&g, &x2, &rest(&x2));
            // some (X, U∖X)-mincut lies inside the minimal (X', U∖X')-mincut
            let outside: Vec<usize> = (0..n).filter(|v| !outer.contains(v)).collect();
            let sinks: Vec<usize> = outside.iter().copied().chain(rest(&x)).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
            let (inside_val, _) = brute_min_cut(&g, &x, &sinks);
            prop_assert_eq!(inside_val, val);
        }
    }
}
