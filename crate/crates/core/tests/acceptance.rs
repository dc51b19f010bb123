//! Acceptance suite: one pass/fail line per criterion.
//!
//! Runs without the libtest harness so the report is always printed; the
//! process exits nonzero if any criterion fails.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ghcut::ghtree::{ghtree_fast_stats, gomory_hu_classic, gusfield, FastConfig, GhTree};
use ghcut::guide::{GuideTree, Node};
use ghcut::maxflow::measured;
use ghcut::oracles::steiner_mincut;
use ghcut::packing::mwu_pack;
use ghcut::ssmc::{ssmc_guided, SsmcConfig};
use ghcut::steiner::mehlhorn_steiner;
use ghcut::verify::{apmf_bruteforce, brute_min_cut, brute_min_steiner_tree, check_k_respecting, validate_against};
use ghcut::{gen, Graph, Weight};

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: u32, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        println!("criterion {id} [{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

struct Instance {
    g: Graph,
    apmf: Vec<Vec<Weight>>,
    trees: Vec<(&'static str, GhTree)>,
    classic_flows: u64,
}

/// Criteria 1, 2 and 8 share the same 200 graphs.
fn cut_trees(report: &mut Report) {
    let start = Instant::now();
    let mut instances = Vec::new();
    let mut failures = Vec::new();
    let (mut retried, mut retries) = (0, 0);
    for (class, dense) in [("sparse", false), ("dense", true)] {
        for i in 0..100u64 {
            let seed = if dense { 1000 + i } else { i };
            let n = ChaCha8Rng::seed_from_u64(seed).gen_range(5..=60);
            let g = if dense { gen::dense(n, 20, seed) } else { gen::sparse(n, 20, seed) };
            let apmf = apmf_bruteforce(&g);
            let (classic, flows) = measured(|| gomory_hu_classic(&g).unwrap());
            let all: Vec<usize> = (0..n).collect();
            let cfg = FastConfig { seed, ..FastConfig::default() };
            let mut trees = vec![("classic", classic), ("gusfield", gusfield(&g).unwrap())];
            match ghtree_fast_stats(&g, &all, &cfg) {
                Ok((t, stats)) => {
                    retries += stats.retries;
                    retried += usize::from(stats.retries > 0);
                    trees.push(("fast", t));
                }
                Err(e) => failures.push(format!("{class} seed {seed}: fast failed: {e}")),
            }
            for (name, t) in &trees {
                if let Err(v) = validate_against(&g, t, &apmf) {
                    failures.push(format!("{class} seed {seed} n {n}: {name}: {v}"));
                }
            }
            instances.push(Instance { g, apmf, trees, classic_flows: flows.calls });
        }
    }
    let rate = retried as f64 / instances.len() as f64;
    report.line(
        1,
        "cut-tree exactness",
        failures.is_empty() && rate <= 0.05,
        format!(
            "{} graphs x 3 constructors, {} failures, fast retried on {} instances ({:.1}%, {} retries) in {:.1?}{}",
            instances.len(),
            failures.len(),
            retried,
            100.0 * rate,
            retries,
            start.elapsed(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    );

    let mut checked = 0;
    let mut mismatches = 0;
    for inst in instances.iter().filter(|i| i.g.n() <= 40) {
        for (_, t) in &inst.trees {
            checked += 1;
            mismatches += usize::from(t.all_pairs() != inst.apmf);
        }
    }
    report.line(
        2,
        "oracle agreement",
        mismatches == 0,
        format!("{checked} trees on n <= 40, {mismatches} matrices differ"),
    );

    let wrong: Vec<String> = instances
        .iter()
        .filter(|i| i.classic_flows != i.g.n() as u64 - 1)
        .map(|i| format!("n {} used {}", i.g.n(), i.classic_flows))
        .collect();
    report.line(
        8,
        "classic flow count",
        wrong.is_empty(),
        format!("{} graphs, {} with a count other than n - 1", instances.len(), wrong.len()),
    );
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, max_w: i64) -> Graph {
    let m = rng.gen_range(0..=3 * n);
    let raw: Vec<(usize, usize, i64)> =
        (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(1..=max_w))).collect();
    Graph::build(n, &raw).unwrap()
}

/// Random tree over a random subset of real vertices containing `s`, plus
/// up to four fake nodes.
fn random_guide(rng: &mut ChaCha8Rng, n: usize, s: usize) -> GuideTree {
    let mut reals: Vec<usize> = (0..n).filter(|&v| v != s && rng.gen_bool(0.8)).collect();
    reals.push(s);
    let mut nodes: Vec<Node> = reals.into_iter().map(Node::Real).collect();
    nodes.extend((0..rng.gen_range(0..=4)).map(Node::Fake));
    nodes.shuffle(rng);
    let edges: Vec<(usize, usize)> = (1..nodes.len()).map(|i| (rng.gen_range(0..i), i)).collect();
    let source = nodes.iter().position(|&x| x == Node::Real(s)).unwrap();
    GuideTree::new(nodes, &edges, source).unwrap()
}

fn ssmc_safety(report: &mut Report) {
    let mut violations = Vec::new();
    let mut pairs = 0;
    for case in 0..500u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(case);
        let n = rng.gen_range(2..=14);
        let g = random_graph(&mut rng, n, 8);
        let s = rng.gen_range(0..n);
        let tree = random_guide(&mut rng, n, s);
        let k = rng.gen_range(1..=4);
        let cfg = SsmcConfig { base_case_size: 3, seed: case, ..SsmcConfig::default() };
        let est = ssmc_guided(&g, &tree, k, &cfg).unwrap();
        for t in tree.real_vertices().into_iter().filter(|&t| t != s) {
            pairs += 1;
            let exact = brute_min_cut(&g, &[s], &[t]).0;
            if est[&t] < exact {
                violations.push(format!("case {case}: t {t} got {} < {exact}", est[&t]));
            }
        }
    }
    report.line(
        3,
        "SSMC safety",
        violations.is_empty(),
        format!(
            "500 cases, {pairs} terminals, {} below the true value{}",
            violations.len(),
            violations.first().map(|v| format!("; first: {v}")).unwrap_or_default()
        ),
    );
}

fn ssmc_completeness(report: &mut Report) {
    let (mut cases, mut hits, mut attempt) = (0, 0, 0u64);
    let mut misses = Vec::new();
    while cases < 200 {
        attempt += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(10_000 + attempt);
        let n = rng.gen_range(4..=14);
        let g = random_graph(&mut rng, n, 8);
        let s = rng.gen_range(0..n);
        let tree = random_guide(&mut rng, n, s);
        let k = rng.gen_range(1..=4);
        let others: Vec<usize> = tree.real_vertices().into_iter().filter(|&t| t != s).collect();
        let t = others[rng.gen_range(0..others.len())];
        let (value, side) = brute_min_cut(&g, &[s], &[t]);
        if !check_k_respecting(&tree, &side, k).respects {
            continue;
        }
        cases += 1;
        let cfg = SsmcConfig { base_case_size: 3, seed: attempt, ..SsmcConfig::default() };
        let est = ssmc_guided(&g, &tree, k, &cfg).unwrap();
        if est[&t] == value {
            hits += 1;
        } else {
            misses.push(format!("seed {attempt} (n {n}, k {k}): {} vs {value}", est[&t]));
        }
    }
    let rate = hits as f64 / cases as f64;
    report.line(
        4,
        "SSMC completeness",
        rate >= 0.95,
        format!(
            "{hits}/{cases} exact ({:.1}%), drawn from {attempt} seeds{}",
            100.0 * rate,
            if misses.is_empty() { String::new() } else { format!("; misses: {}", misses.join(", ")) }
        ),
    );
}

fn packing(report: &mut Report) {
    let (mut infeasible, mut weak) = (Vec::new(), Vec::new());
    let mut worst = f64::INFINITY;
    for case in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(20_000 + case);
        let n = rng.gen_range(4..=30);
        let g = gen::sparse(n, 20, case);
        let u = gen::random_subset(n, rng.gen_range(2..=8.min(n)), case);
        let p = mwu_pack(&g, &u, 0.1).unwrap();
        let lambda = steiner_mincut(&g, &u).unwrap() as f64;
        if !p.is_feasible(&g) {
            infeasible.push(case);
        }
        let ratio = p.total_value() / lambda;
        worst = worst.min(ratio);
        if ratio < 1.0 / 4.5 {
            weak.push(case);
        }
    }
    report.line(
        5,
        "packing bound and feasibility",
        infeasible.is_empty() && weak.is_empty(),
        format!(
            "50 instances, {} infeasible, {} below lambda/4.5, worst value/lambda {:.3}",
            infeasible.len(),
            weak.len(),
            worst
        ),
    );
}

fn mwu_counters(report: &mut Report) {
    let mut bad = Vec::new();
    let mut runs = 0;
    for case in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(30_000 + case);
        let n = rng.gen_range(3..=25);
        let g = gen::sparse(n, 1, case);
        let u = gen::random_subset(n, rng.gen_range(2..=6.min(n)), case);
        for eps in [0.1, 0.25] {
            runs += 1;
            let p = mwu_pack(&g, &u, eps).unwrap();
            let bound = p.augmentation_bound();
            let total: u64 = p.augmentations.iter().sum();
            let per_edge = p.augmentations.iter().all(|&a| a <= bound);
            let m_bound = g.m() as u64 * bound;
            if !per_edge || total > m_bound || p.iterations > m_bound {
                bad.push(format!("case {case} eps {eps}"));
            }
        }
    }
    report.line(
        6,
        "MWU augmentation counters",
        bad.is_empty(),
        format!("{runs} unweighted runs, {} over the bound", bad.len()),
    );
}

fn mehlhorn_ratio(report: &mut Report) {
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for case in 0..300u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(40_000 + case);
        let n = rng.gen_range(2..=12);
        let g = gen::random_graph(n, rng.gen_range(n - 1..=3 * n), 1, true, case);
        let lengths: Vec<f64> = (0..g.m()).map(|_| rng.gen_range(0.1..10.0)).collect();
        let u = gen::random_subset(n, rng.gen_range(2..=5.min(n)), case);
        let approx = mehlhorn_steiner(&g, &lengths, &u).unwrap().length;
        let (opt, _) = brute_min_steiner_tree(&g, &lengths, &u).unwrap();
        count += 1;
        worst = worst.max(approx / opt);
        if approx > 2.0 * opt + 1e-9 {
            bad.push(case);
        }
    }
    report.line(
        7,
        "Mehlhorn ratio",
        bad.is_empty(),
        format!("{count} instances, {} above 2x, worst ratio {worst:.3}", bad.len()),
    );
}

fn smoke_scale(report: &mut Report) {
    let g = gen::random_graph(200, 2000, 100, true, 9);
    let all: Vec<usize> = (0..200).collect();
    let start = Instant::now();
    let out = ghtree_fast_stats(&g, &all, &FastConfig { seed: 9, ..FastConfig::default() });
    let took = start.elapsed();
    let detail = match &out {
        Ok((_, stats)) => format!(
            "n 200, m {}, spot-checked, {:.1?}, depth {}, retries {}, {} flows",
            g.m(),
            took,
            stats.depth,
            stats.retries,
            stats.flow.calls
        ),
        Err(e) => format!("failed after {took:.1?}: {e}"),
    };
    report.line(9, "smoke scale", out.is_ok() && took.as_secs_f64() < 60.0, detail);
}

fn main() {
    let mut report = Report { failed: 0 };
    cut_trees(&mut report);
    ssmc_safety(&mut report);
    ssmc_completeness(&mut report);
    packing(&mut report);
    mwu_counters(&mut report);
    mehlhorn_ratio(&mut report);
    smoke_scale(&mut report);
    if report.failed > 0 {
        println!("{} criteria failed", report.failed);
        std::process::exit(1);
    }
    println!("all criteria passed");
}
