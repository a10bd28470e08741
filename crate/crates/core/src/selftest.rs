//! Desk-scale oracle comparisons behind the `selftest` command.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gf2poly::GfPoly;
use crate::hafnian::{count_matchings_mod2k, hf_mod2k, SymMatZ};
use crate::linalg::{rank_f, MatF};
use crate::oracles::*;
use crate::permanent::{perm_interpolate, perm_zx_mod2k, ZxMatrix, DEFAULT_INTERPOLATION_BUDGET};
use crate::sdc::{shortest_cycle_through_edges, shortest_two_disjoint_cycles, solve_sdp2, MarkedInstance, WeightedGraph};
use crate::zpoly::ZPoly;

#[derive(Debug, Clone)]
pub struct Row {
    pub name: &'static str,
    pub cases: usize,
    pub passed: bool,
    pub elapsed: std::time::Duration,
}

pub fn random_zx(rng: &mut impl Rng, n: usize, max_deg: usize, max_coeff: i64) -> ZxMatrix {
    let entries = (0..n * n)
        .map(|_| {
            let c: Vec<i64> = (0..=max_deg).map(|_| rng.gen_range(-max_coeff..=max_coeff)).collect();
            ZPoly::from_i64s(&c)
        })
        .collect();
    ZxMatrix::new(n, entries).expect("square")
}

pub fn random_sym(rng: &mut impl Rng, n: usize, max: i64) -> SymMatZ {
    let upper: Vec<i64> = (0..n * (n + 1) / 2).map(|_| rng.gen_range(0..=max)).collect();
    SymMatZ::from_upper(n, &upper).expect("triangle")
}

/// Erdős–Rényi graph with weights in `1..=max_w`.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64, max_w: u64) -> WeightedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v, rng.gen_range(1..=max_w)));
            }
        }
    }
    WeightedGraph::new(n, edges).expect("simple")
}

/// Random spanning tree plus each remaining pair with probability `p`.
pub fn random_connected_graph(rng: &mut impl Rng, n: usize, p: f64, max_w: u64) -> WeightedGraph {
    let mut edges = Vec::new();
    let mut present = std::collections::HashSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push((u, v, rng.gen_range(1..=max_w)));
        present.insert((u, v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present.contains(&(u, v)) && rng.gen_bool(p) {
                edges.push((u, v, rng.gen_range(1..=max_w)));
            }
        }
    }
    WeightedGraph::new(n, edges).expect("simple")
}

/// `k` pairwise vertex-disjoint edges chosen at random, if there are enough.
pub fn random_marked(rng: &mut impl Rng, g: &WeightedGraph, k: usize) -> Option<Vec<usize>> {
    let mut order: Vec<usize> = (0..g.m()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut used = 0u64;
    let mut out = Vec::new();
    for e in order {
        let ed = g.edge(e);
        let bits = (1u64 << ed.u) | (1u64 << ed.v);
        if used & bits == 0 {
            used |= bits;
            out.push(e);
            if out.len() == k {
                return Some(out);
            }
        }
    }
    None
}

fn check(name: &'static str, cases: usize, mut f: impl FnMut(usize) -> bool) -> Row {
    let start = std::time::Instant::now();
    let passed = (0..cases).all(&mut f);
    Row {
        name,
        cases,
        passed,
        elapsed: start.elapsed(),
    }
}

pub fn run(seed: u64) -> Vec<Row> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = small_field(6);
    let mut rows = Vec::new();
    rows.push(check("permanent mod 2^k vs expansion", 30, |i| {
        let a = random_zx(&mut rng, 1 + i % 5, 2, 3);
        let k = 1 + (i % 4) as u32;
        perm_zx_mod2k(&a, k).ok() == brute_permanent(&a).ok().map(|p| p.reduce_mod_pow2(k))
    }));
    rows.push(check("interpolation vs direct", 4, |i| {
        let a = random_zx(&mut rng, 2 + i % 2, 1, 3);
        let k = 1 + (i % 2) as u32;
        perm_interpolate(&a, k, DEFAULT_INTERPOLATION_BUDGET).ok() == perm_zx_mod2k(&a, k).ok()
    }));
    rows.push(check("hafnian mod 2^k vs pairings", 30, |i| {
        let a = random_sym(&mut rng, 2 * (i % 5), 7);
        let k = 1 + (i % 4) as u32;
        let want = brute_hafnian(&a).map(|h| h.rem_euclid(1 << k) as u64);
        hf_mod2k(&a, k).ok() == want.ok()
    }));
    rows.push(check("matching counts vs enumeration", 10, |i| {
        let g = random_graph(&mut rng, 2 + 2 * (i % 4), 0.6, 1);
        count_matchings_mod2k(&g, 4).ok() == brute_matchings(&g).ok().map(|c| c % 16)
    }));
    rows.push(check("shortest cycle vs enumeration", 6, |_| {
        let g = random_graph(&mut rng, 6, 0.6, 2);
        let Some(m) = random_marked(&mut rng, &g, 1) else { return true };
        let inst = MarkedInstance::new(g, m).unwrap();
        shortest_cycle_through_edges(&inst, seed, 5).ok() == brute_disjoint_cycles(&inst, 1, 3).ok()
    }));
    rows.push(check("two disjoint cycles vs enumeration", 4, |_| {
        let g = random_graph(&mut rng, 6, 0.6, 2);
        let Some(m) = random_marked(&mut rng, &g, 2) else { return true };
        let inst = MarkedInstance::new(g, m).unwrap();
        shortest_two_disjoint_cycles(&inst, seed, 5).ok() == brute_disjoint_cycles(&inst, 2, 3).ok()
    }));
    rows.push(check("disjoint paths vs enumeration", 4, |_| {
        let g = random_graph(&mut rng, 5, 0.6, 2);
        solve_sdp2(&g, 0, 1, 2, 3, seed, 5).ok() == brute_disjoint_paths(&g, 0, 1, 2, 3).ok()
    }));
    rows.push(check("field inverse vs Euclid", 63, |i| {
        let a = field.from_gf(&GfPoly::from_u64(i as u64 + 1));
        a.field_inverse().ok() == ext_euclid_inverse(&a).ok()
    }));
    let rand_f = |rng: &mut ChaCha8Rng, n: usize| {
        MatF::from_fn(&field, n, n, |_, _| {
            if rng.gen_bool(0.4) {
                field.zero()
            } else {
                field.from_gf(&GfPoly::from_u64(rng.gen_range(1..64)))
            }
        })
    };
    rows.push(check("rank vs characteristic polynomial", 10, |i| {
        let a = rand_f(&mut rng, 1 + i % 3);
        rank_via_charpoly(&a).ok() == rank_f(&a).ok()
    }));
    rows.push(check("determinant vs clow sequences", 10, |i| {
        let a = rand_f(&mut rng, 1 + i % 3);
        mv_det_check(&a) == Ok(true)
    }));
    rows.push(check("Toeplitz embedding", 10, |_| {
        let f = ZPoly::from_i64s(&[rng.gen_range(-5..5), rng.gen_range(-5..5), rng.gen_range(-5..5)]);
        let g = ZPoly::from_i64s(&[rng.gen_range(-5..5), rng.gen_range(-5..5)]);
        companion_embedding_check(&f, &g, 5) == Ok(true)
    }));
    rows
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_rows_pass() {
        for row in super::run(1) {
            assert!(row.passed, "{}", row.name);
        }
    }
}
