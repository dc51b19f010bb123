use ghcut::ghtree::{ghtree_fast, gomory_hu_classic, gusfield, FastConfig};
use ghcut::verify::{apmf_bruteforce, mincut_triangle_holds, validate_ghtree, NO_PAIR};
use ghcut::{gen, io, Graph};
use proptest::prelude::*;

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..14, 0usize..40, 1u64..12, any::<bool>(), any::<u64>())
        .prop_map(|(n, extra, w, connected, seed)| gen::random_graph(n, n + extra, w, connected, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn every_constructor_gives_a_cut_tree(g in arb_graph(), seed in any::<u64>()) {
        let apmf = apmf_bruteforce(&g);
        prop_assert!(mincut_triangle_holds(&apmf));
        let all: Vec<usize> = (0..g.n()).collect();
        let fast = ghtree_fast(&g, &all, &FastConfig { seed, validate: false, ..FastConfig::default() }).unwrap();
        for t in [gomory_hu_classic(&g).unwrap(), gusfield(&g).unwrap(), fast] {
            prop_assert!(validate_ghtree(&g, &t).is_ok());
            let m = t.all_pairs();
            for a in 0..g.n() {
                for b in 0..g.n() {
                    let want = if a == b { NO_PAIR } else { apmf[a][b] };
                    prop_assert_eq!(m[a][b], want);
                }
            }
        }
    }

    #[test]
    fn steiner_trees_validate(g in arb_graph(), k in 1usize..8, seed in any::<u64>()) {
        let u = gen::random_subset(g.n(), k, seed);
        let t = ghtree_fast(&g, &u, &FastConfig { seed, validate: false, ..FastConfig::default() }).unwrap();
        prop_assert_eq!(t.terminals(), &u[..]);
        prop_assert_eq!(t.edges().len(), u.len() - 1);
        prop_assert!(validate_ghtree(&g, &t).is_ok());
        for &x in &u {
            prop_assert_eq!(t.rep(x), x);
        }
    }

    #[test]
    fn files_round_trip(g in arb_graph(), k in 1usize..8, seed in any::<u64>()) {
        prop_assert_eq!(&io::parse_graph(&io::write_graph(&g)).unwrap(), &g);
        let u = gen::random_subset(g.n(), k, seed);
        let t = ghtree_fast(&g, &u, &FastConfig { seed, ..FastConfig::default() }).unwrap();
        let text = io::write_tree(&t);
        let back = io::parse_tree(&text).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(io::write_tree(&back), text);
        let json = serde_json::to_string(&io::tree_to_json(&t)).unwrap();
        prop_assert_eq!(&io::tree_from_json(&json).unwrap(), &t);
    }

    #[test]
    fn same_seed_same_tree(g in arb_graph(), seed in any::<u64>()) {
        let all: Vec<usize> = (0..g.n()).collect();
        let cfg = FastConfig { seed, ..FastConfig::default() };
        prop_assert_eq!(ghtree_fast(&g, &all, &cfg).unwrap(), ghtree_fast(&g, &all, &cfg).unwrap());
    }
}

#[test]
fn classic_uses_n_minus_one_flows() {
    for seed in 0..10 {
        let g = gen::dense(20, 15, seed);
        let (_, c) = ghcut::maxflow::measured(|| gomory_hu_classic(&g).unwrap());
        assert_eq!(c.calls, 19);
    }
}
