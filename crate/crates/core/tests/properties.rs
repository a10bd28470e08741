//! Cross-module properties checked against brute-force references.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use permod::formats::{parse_graph, parse_matrix, parse_symmetric};
use permod::hafnian::{count_matchings_mod2k, hf_mod2k};
use permod::oracles::*;
use permod::permanent::{perm_zx_mod2k, ZxMatrix};
use permod::sdc::*;
use permod::selftest::{random_graph, random_marked, random_sym, random_zx};
use permod::zpoly::ZPoly;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random instance with `k` marked edges, if the graph has room for them.
fn instance(seed: u64, n: usize, k: usize) -> Option<MarkedInstance> {
    let mut r = rng(seed);
    let g = random_graph(&mut r, n, 0.6, 3);
    let m = random_marked(&mut r, &g, k)?;
    Some(MarkedInstance::new(g, m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn permanent_matches_expansion(seed: u64, n in 1usize..=5, k in 1u32..=4) {
        let mut r = rng(seed);
        let a = random_zx(&mut r, n, 2, 4);
        let want = brute_permanent(&a).unwrap().reduce_mod_pow2(k);
        prop_assert_eq!(perm_zx_mod2k(&a, k).unwrap(), want);
    }

    #[test]
    fn permanent_reductions_agree(seed: u64, n in 1usize..=5) {
        let a = random_zx(&mut rng(seed), n, 2, 7);
        let p4 = perm_zx_mod2k(&a, 4).unwrap();
        for k in 1..4 {
            prop_assert_eq!(perm_zx_mod2k(&a, k).unwrap(), p4.reduce_mod_pow2(k));
        }
    }

    #[test]
    fn permanent_of_transpose(seed: u64, n in 1usize..=5) {
        let a = random_zx(&mut rng(seed), n, 2, 3);
        let t = ZxMatrix::new(n, (0..n * n).map(|i| a.get(i % n, i / n).clone()).collect()).unwrap();
        prop_assert_eq!(perm_zx_mod2k(&a, 3).unwrap(), perm_zx_mod2k(&t, 3).unwrap());
    }

    #[test]
    fn polynomial_text_round_trips(coeffs in proptest::collection::vec(-20i64..20, 0..8)) {
        let p = ZPoly::from_i64s(&coeffs);
        let back: ZPoly = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn hafnian_matches_pairings(seed: u64, half in 0usize..=4, k in 1u32..=6) {
        let a = random_sym(&mut rng(seed), 2 * half, 9);
        let want = brute_hafnian(&a).unwrap().rem_euclid(1 << k) as u64;
        prop_assert_eq!(hf_mod2k(&a, k).unwrap(), want);
    }

    #[test]
    fn matchings_match_enumeration(seed: u64, n in 1usize..=8) {
        let g = random_graph(&mut rng(seed), n, 0.5, 1);
        let want = brute_matchings(&g).unwrap() % 8;
        prop_assert_eq!(count_matchings_mod2k(&g, 3).unwrap(), want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn f1_is_single_cycle_cover_sum(seed: u64, n in 3usize..=7, k in 1usize..=3) {
        let Some(inst) = instance(seed, n, k) else { return Ok(()) };
        let (single, _) = brute_cover_sums(&inst).unwrap();
        prop_assert_eq!(f1(&inst).unwrap().to_zpoly(), single.reduce_mod_pow2(1));
    }

    #[test]
    fn f2_is_separating_cover_sum(seed: u64, n in 4usize..=6, k in 2usize..=3) {
        let Some(inst) = instance(seed, n, k) else { return Ok(()) };
        let (_, split) = brute_cover_sums(&inst).unwrap();
        let f = f2(&inst).unwrap();
        // e_2's cycle runs both ways, so every coefficient is even
        prop_assert!(f.residues().iter().all(|c| c % 2 == 0));
        prop_assert_eq!(f.to_zpoly(), split.reduce_mod_pow2(2));
    }

    #[test]
    fn lowest_exponent_survives_randomization(seed: u64, n in 3usize..=6) {
        let Some(inst) = instance(seed, n, 1) else { return Ok(()) };
        let g = inst.graph();
        let h = randomize_weights(g, seed);
        let scale = weight_scale(g);
        for (e, f) in g.edges().iter().zip(h.edges()) {
            prop_assert_eq!(f.w / scale, e.w);
            prop_assert!(f.w % scale < 2 * g.m() as u64);
        }
        prop_assert!(degree_bound(g) > g.n() * h.max_weight() as usize);
    }

    #[test]
    fn cycles_match_enumeration(seed: u64, n in 3usize..=6, l in 1usize..=2) {
        let Some(inst) = instance(seed, n, l) else { return Ok(()) };
        let got = if l == 1 {
            shortest_cycle_through_edges(&inst, seed, 4).unwrap()
        } else {
            shortest_two_disjoint_cycles(&inst, seed, 4).unwrap()
        };
        prop_assert_eq!(got, brute_disjoint_cycles(&inst, l, 3).unwrap());
    }

    #[test]
    fn reconstruction_is_optimal(seed: u64, n in 3usize..=6) {
        let Some(inst) = instance(seed, n, 1) else { return Ok(()) };
        let Some(w) = brute_disjoint_cycles(&inst, 1, 3).unwrap() else { return Ok(()) };
        for t in 0..4 {
            let s = trial_seed(seed, t);
            if trial_value(&inst, 1, s).unwrap() != Some(w) {
                continue;
            }
            match reconstruct_cycles(&inst, 1, w, s) {
                Ok(edges) => {
                    prop_assert_eq!(verify_cycles(&inst, &edges, 1), Some(w));
                    return Ok(());
                }
                Err(SdcError::NonUnique) => {}
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn paths_match_enumeration(seed: u64) {
        let g = random_graph(&mut rng(seed), 5, 0.6, 2);
        prop_assert_eq!(
            solve_sdp2(&g, 0, 1, 2, 3, seed, 4).unwrap(),
            brute_disjoint_paths(&g, 0, 1, 2, 3).unwrap()
        );
    }
}

#[test]
fn marked_vertices_reduce_to_marked_edges() {
    let g = WeightedGraph::new(6, vec![(0, 1, 1), (1, 2, 1), (2, 0, 1), (3, 4, 2), (4, 5, 2), (5, 3, 2), (2, 3, 1)]).unwrap();
    assert_eq!(sdce_from_marked_vertices(&g, &[0, 4], 2, 1, 3).unwrap(), Some(9));
    assert_eq!(sdce_from_marked_vertices(&g, &[0, 4], 1, 1, 3).unwrap(), None);
    assert_eq!(sdce_from_marked_vertices(&g, &[1, 2], 1, 1, 3).unwrap(), Some(3));
    let edges = reconstruct_marked_vertices(&g, &[0, 4], 2, 9, 1, 3).unwrap();
    let mut pairs: Vec<(usize, usize)> = edges.iter().map(|&i| (g.edge(i).u, g.edge(i).v)).collect();
    pairs.sort();
    assert_eq!(pairs, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
}

#[test]
fn file_formats_feed_the_solvers() {
    let a = parse_matrix("3\n1\n1,1\n2,1\n0,1\n0,0,1\n0,1,1\n0,0,1\n3\n3,0,1\n").unwrap();
    assert_eq!(perm_zx_mod2k(&a, 2).unwrap().to_string(), "2x^5+2x^4+2x^3");
    let c6 = parse_graph("6 6\n0 1 1\n1 2 1\n2 3 1\n3 4 1\n4 5 1\n5 0 1\n").unwrap();
    assert_eq!(count_matchings_mod2k(&c6.graph, 2).unwrap(), 2);
    let tri = parse_graph("3 3\n0 1 1\n1 2 1\n0 2 1\nmarked_edges: 0\n").unwrap();
    let inst = MarkedInstance::new(tri.graph, tri.marked_edges).unwrap();
    assert_eq!(shortest_cycle_through_edges(&inst, 1, 2).unwrap(), Some(3));
    let k4 = parse_symmetric("4\n1 1 1\n1 1\n1\n").unwrap();
    assert_eq!(hf_mod2k(&k4, 2).unwrap(), 3);
}
