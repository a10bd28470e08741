//! Exhaustive reference computations, used only to cross-check the fast
//! paths. Every routine has a hard size cap.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::gf2poly::GfPoly;
use crate::hafnian::SymMatZ;
use crate::linalg::{det_f, MatF};
use crate::permanent::{MatR, ZxMatrix};
use crate::ring::{RingCtx, RingElem};
use crate::sdc::{MarkedInstance, WeightedGraph};
use crate::zpoly::ZPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("input too large for brute force ({0} > {1})")]
    TooLarge(usize, usize),
    #[error("zero has no inverse")]
    Zero,
    #[error("not a field")]
    NotField,
    #[error("degree overflow: deg f + deg g must be below {0}")]
    DegreeOverflow(usize),
    #[error("matrix not square")]
    NotSquare,
}

fn cap(n: usize, max: usize) -> Result<(), OracleError> {
    if n > max {
        Err(OracleError::TooLarge(n, max))
    } else {
        Ok(())
    }
}

fn perm_expand<T: Clone>(n: usize, one: T, get: &impl Fn(usize, usize) -> T, mul: &impl Fn(&T, &T) -> T, add: &impl Fn(&T, &T) -> T, zero: &T) -> T {
    fn go<T: Clone>(
        row: usize,
        used: u32,
        acc: T,
        n: usize,
        get: &impl Fn(usize, usize) -> T,
        mul: &impl Fn(&T, &T) -> T,
        add: &impl Fn(&T, &T) -> T,
        total: &mut T,
    ) {
        if row == n {
            *total = add(total, &acc);
            return;
        }
        for c in 0..n {
            if used & (1 << c) == 0 {
                go(row + 1, used | (1 << c), mul(&acc, &get(row, c)), n, get, mul, add, total);
            }
        }
    }
    let mut total = zero.clone();
    go(0, 0, one, n, get, mul, add, &mut total);
    total
}

/// Exact permanent over Z[x] by the n!-term expansion.
pub fn brute_permanent(a: &ZxMatrix) -> Result<ZPoly, OracleError> {
    cap(a.n(), 9)?;
    Ok(perm_expand(
        a.n(),
        ZPoly::one(),
        &|i, j| a.get(i, j).clone(),
        &|x, y| x * y,
        &|x, y| x + y,
        &ZPoly::zero(),
    ))
}

/// Permanent over a ring context by the n!-term expansion.
pub fn brute_permanent_ring(a: &MatR) -> Result<RingElem, OracleError> {
    if !a.is_square() {
        return Err(OracleError::NotSquare);
    }
    cap(a.rows(), 9)?;
    let ctx = a.ctx();
    Ok(perm_expand(
        a.rows(),
        ctx.one(),
        &|i, j| a.get(i, j).clone(),
        &|x, y| x.mul(y),
        &|x, y| x.add(y),
        &ctx.zero(),
    ))
}

/// Sum over perfect pairings of the products of paired entries.
pub fn brute_hafnian(a: &SymMatZ) -> Result<i128, OracleError> {
    cap(a.n(), 10)?;
    if a.n() % 2 == 1 {
        return Ok(0);
    }
    fn go(a: &SymMatZ, free: u32) -> i128 {
        if free == 0 {
            return 1;
        }
        let i = free.trailing_zeros() as usize;
        let rest = free & !(1 << i);
        let mut s = 0;
        for j in 0..a.n() {
            if rest & (1 << j) != 0 && a.get(i, j) != 0 {
                s += a.get(i, j) as i128 * go(a, rest & !(1 << j));
            }
        }
        s
    }
    Ok(go(a, ((1u64 << a.n()) - 1) as u32))
}

/// Perfect matchings by direct enumeration.
pub fn brute_matchings(g: &WeightedGraph) -> Result<u64, OracleError> {
    Ok(brute_hafnian(&SymMatZ::adjacency(g))? as u64)
}

#[derive(Debug, Clone)]
struct Cycle {
    vertices: u32,
    edges: u64,
    weight: u64,
}

/// All simple cycles of length >= `min_len`; with `min_len == 2` each edge
/// also counts as a 2-cycle of twice its weight.
fn simple_cycles(g: &WeightedGraph, min_len: usize) -> Vec<Cycle> {
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        adj[e.u].push((e.v, i));
        adj[e.v].push((e.u, i));
    }
    let mut out = Vec::new();
    if min_len <= 2 {
        for (i, e) in g.edges().iter().enumerate() {
            out.push(Cycle {
                vertices: (1 << e.u) | (1 << e.v),
                edges: 1 << i,
                weight: 2 * e.w,
            });
        }
    }
    // cycles with smallest vertex `s`, recorded once per direction pair
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        s: usize,
        u: usize,
        len: usize,
        verts: u32,
        edges: u64,
        w: u64,
        first: usize,
        adj: &[Vec<(usize, usize)>],
        g: &WeightedGraph,
        out: &mut Vec<Cycle>,
    ) {
        for &(v, i) in &adj[u] {
            if v == s && len >= 3 && u > first {
                out.push(Cycle {
                    vertices: verts,
                    edges: edges | (1 << i),
                    weight: w + g.edge(i).w,
                });
            } else if v > s && verts & (1 << v) == 0 {
                let f = if len == 1 { v } else { first };
                dfs(s, v, len + 1, verts | (1 << v), edges | (1 << i), w + g.edge(i).w, f, adj, g, out);
            }
        }
    }
    for s in 0..n {
        dfs(s, s, 1, 1 << s, 0, 0, usize::MAX, &adj, g, &mut out);
    }
    out
}

/// Minimum weight of `l` vertex-disjoint cycles, each through a marked
/// edge, together through all marked edges. Cycles have length at least
/// `min_len` (2 or 3).
pub fn brute_disjoint_cycles(inst: &MarkedInstance, l: usize, min_len: usize) -> Result<Option<u64>, OracleError> {
    Ok(brute_optimal_cycle_sets(inst, l, min_len)?.map(|(w, _)| w))
}

/// The optimum together with the edge sets (bit masks over edge indices)
/// of every optimal solution.
pub fn brute_optimal_cycle_sets(inst: &MarkedInstance, l: usize, min_len: usize) -> Result<Option<(u64, Vec<u64>)>, OracleError> {
    let g = inst.graph();
    cap(g.n(), 8)?;
    cap(g.m(), 64)?;
    let marked: u64 = inst.marked().iter().fold(0, |m, &i| m | (1 << i));
    let cycles: Vec<Cycle> = simple_cycles(g, min_len)
        .into_iter()
        .filter(|c| c.edges & marked != 0)
        .collect();
    let mut best: Option<(u64, Vec<u64>)> = None;
    #[allow(clippy::too_many_arguments)]
    fn search(cycles: &[Cycle], from: usize, left: usize, verts: u32, edges: u64, w: u64, marked: u64, best: &mut Option<(u64, Vec<u64>)>) {
        if left == 0 {
            if edges & marked == marked {
                match best {
                    Some((b, sets)) if *b == w => sets.push(edges),
                    Some((b, _)) if *b < w => {}
                    _ => *best = Some((w, vec![edges])),
                }
            }
            return;
        }
        for (i, c) in cycles.iter().enumerate().skip(from) {
            if c.vertices & verts == 0 {
                search(cycles, i + 1, left - 1, verts | c.vertices, edges | c.edges, w + c.weight, marked, best);
            }
        }
    }
    search(&cycles, 0, l, 0, 0, 0, marked, &mut best);
    Ok(best)
}

/// Minimum total weight of vertex-disjoint `s1`-`t1` and `s2`-`t2` paths.
pub fn brute_disjoint_paths(g: &WeightedGraph, s1: usize, t1: usize, s2: usize, t2: usize) -> Result<Option<u64>, OracleError> {
    cap(g.n(), 10)?;
    let mut adj = vec![Vec::new(); g.n()];
    for e in g.edges() {
        adj[e.u].push((e.v, e.w));
        adj[e.v].push((e.u, e.w));
    }
    fn paths(adj: &[Vec<(usize, u64)>], u: usize, t: usize, verts: u32, w: u64, out: &mut Vec<(u32, u64)>) {
        if u == t {
            out.push((verts, w));
            return;
        }
        for &(v, ew) in &adj[u] {
            if verts & (1 << v) == 0 {
                paths(adj, v, t, verts | (1 << v), w + ew, out);
            }
        }
    }
    let mut p1 = Vec::new();
    let mut p2 = Vec::new();
    paths(&adj, s1, t1, 1 << s1, 0, &mut p1);
    paths(&adj, s2, t2, 1 << s2, 0, &mut p2);
    let mut best: Option<u64> = None;
    for &(v1, w1) in &p1 {
        for &(v2, w2) in &p2 {
            if v1 & v2 == 0 && best.is_none_or(|b| w1 + w2 < b) {
                best = Some(w1 + w2);
            }
        }
    }
    Ok(best)
}

/// Exact pattern sums predicted by enumerating cycle covers directly: the
/// covers of the graph (self-loops at non-terminals) that use every marked
/// edge, orient `e_1` as stored and never close a 2-cycle on a marked edge.
/// Returns the sum over covers with one non-trivial cycle of length >= 3,
/// and the sum over covers that separate `e_1` from `e_2`.
pub fn brute_cover_sums(inst: &MarkedInstance) -> Result<(ZPoly, ZPoly), OracleError> {
    let g = inst.graph();
    let n = g.n();
    cap(n, 8)?;
    let term = inst.terminals();
    let mut arc: Vec<Vec<Option<u64>>> = vec![vec![None; n]; n];
    for e in g.edges() {
        arc[e.u][e.v] = Some(e.w);
        arc[e.v][e.u] = Some(e.w);
    }
    for (x, row) in arc.iter_mut().enumerate() {
        if !inst.is_terminal(x) {
            row[x] = Some(0);
        }
    }
    let mut single = BTreeMap::<u64, i64>::new();
    let mut split = BTreeMap::<u64, i64>::new();
    let mut sigma = vec![usize::MAX; n];
    fn go(
        i: usize,
        used: u32,
        w: u64,
        sigma: &mut Vec<usize>,
        arc: &[Vec<Option<u64>>],
        term: &[(usize, usize)],
        single: &mut BTreeMap<u64, i64>,
        split: &mut BTreeMap<u64, i64>,
    ) {
        let n = arc.len();
        if i == n {
            let uses = |a: usize, b: usize| sigma[a] == b || sigma[b] == a;
            if term.iter().any(|&(s, t)| !uses(s, t)) || sigma[term[0].0] != term[0].1 {
                return;
            }
            if term.iter().any(|&(s, t)| sigma[s] == t && sigma[t] == s) {
                return;
            }
            let mut cycle_of = vec![usize::MAX; n];
            let mut long = 0;
            for s in 0..n {
                if cycle_of[s] != usize::MAX {
                    continue;
                }
                let mut len = 0;
                let mut x = s;
                while cycle_of[x] == usize::MAX {
                    cycle_of[x] = s;
                    x = sigma[x];
                    len += 1;
                }
                if len >= 3 {
                    long += 1;
                }
            }
            if long == 1 {
                *single.entry(w).or_default() += 1;
            }
            if term.len() >= 2 && cycle_of[term[0].0] != cycle_of[term[1].0] {
                *split.entry(w).or_default() += 1;
            }
            return;
        }
        for j in 0..n {
            if used & (1 << j) == 0 {
                if let Some(aw) = arc[i][j] {
                    sigma[i] = j;
                    go(i + 1, used | (1 << j), w + aw, sigma, arc, term, single, split);
                }
            }
        }
    }
    go(0, 0, 0, &mut sigma, &arc, &term, &mut single, &mut split);
    let to_poly = |m: BTreeMap<u64, i64>| {
        m.into_iter()
            .fold(ZPoly::zero(), |acc, (e, c)| &acc + &ZPoly::monomial(c, e as usize))
    };
    Ok((to_poly(single), to_poly(split)))
}

/// Inverse in the field by the extended Euclidean algorithm.
pub fn ext_euclid_inverse(a: &RingElem) -> Result<RingElem, OracleError> {
    let ctx = a.ctx();
    if !ctx.is_field() {
        return Err(OracleError::NotField);
    }
    if a.is_zero() {
        return Err(OracleError::Zero);
    }
    let (mut r0, mut r1) = (ctx.p().clone(), a.to_gf());
    let (mut s0, mut s1) = (GfPoly::zero(), GfPoly::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1).expect("non-zero divisor");
        let s = s0.add(&q.mul(&s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    Ok(ctx.from_gf(&s0))
}

type Bivariate = BTreeMap<(u32, u32), RingElem>;

fn bi_mul(a: &Bivariate, b: &Bivariate) -> Bivariate {
    let mut out = Bivariate::new();
    for (&(ta, ya), ca) in a {
        for (&(tb, yb), cb) in b {
            let key = (ta + tb, ya + yb);
            let v = ca.mul(cb);
            match out.get_mut(&key) {
                Some(x) => x.add_assign(&v),
                None => {
                    out.insert(key, v);
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn bi_add(a: &mut Bivariate, b: &Bivariate) {
    for (k, v) in b {
        match a.get_mut(k) {
            Some(x) => x.add_assign(v),
            None => {
                a.insert(*k, v.clone());
            }
        }
    }
    a.retain(|_, v| !v.is_zero());
}

/// Rank from the characteristic polynomial of `Y B`, where `B` is the
/// symmetric block matrix `[[0, A], [A^T, 0]]` and `Y = diag(y^(i-1))`.
pub fn rank_via_charpoly(a: &MatF) -> Result<usize, OracleError> {
    if !a.is_square() {
        return Err(OracleError::NotSquare);
    }
    let n = a.rows();
    cap(n, 4)?;
    let ctx = a.ctx();
    if !ctx.is_field() {
        return Err(OracleError::NotField);
    }
    let m = 2 * n;
    let b = |i: usize, j: usize| -> RingElem {
        match (i < n, j < n) {
            (true, false) => a.get(i, j - n).clone(),
            (false, true) => a.get(j, i - n).clone(),
            _ => ctx.zero(),
        }
    };
    let entry = |i: usize, j: usize| -> Bivariate {
        let mut e = Bivariate::new();
        let v = b(i, j).neg();
        if !v.is_zero() {
            e.insert((0, i as u32), v);
        }
        if i == j {
            bi_add(&mut e, &BTreeMap::from([((1, 0), ctx.one())]));
        }
        e
    };
    // Laplace expansion row by row over column subsets; signs vanish in
    // characteristic 2
    let mut dp: Vec<Bivariate> = vec![Bivariate::new(); 1 << m];
    dp[0].insert((0, 0), ctx.one());
    for mask in 0u32..(1 << m) {
        let row = mask.count_ones() as usize;
        if row == m || dp[mask as usize].is_empty() {
            continue;
        }
        let cur = dp[mask as usize].clone();
        for c in 0..m {
            if mask & (1 << c) == 0 {
                let e = entry(row, c);
                if !e.is_empty() {
                    let prod = bi_mul(&cur, &e);
                    bi_add(&mut dp[(mask | (1 << c)) as usize], &prod);
                }
            }
        }
    }
    let charpoly = &dp[(1 << m) - 1];
    let lowest = charpoly.keys().map(|&(t, _)| t as usize).min().unwrap_or(m);
    Ok((m - lowest) / 2)
}

fn toeplitz(f: &ZPoly, d: usize) -> Vec<Vec<BigInt>> {
    (0..d)
        .map(|i| (0..d).map(|j| if j <= i { f.coeff(i - j) } else { BigInt::zero() }).collect())
        .collect()
}

/// Checks `P(f+g) = P(f) + P(g)` and `P(fg) = P(f) P(g)` for the `d x d`
/// lower-triangular Toeplitz embedding.
pub fn companion_embedding_check(f: &ZPoly, g: &ZPoly, d: usize) -> Result<bool, OracleError> {
    let df = f.degree().unwrap_or(0);
    let dg = g.degree().unwrap_or(0);
    if df + dg >= d {
        return Err(OracleError::DegreeOverflow(d));
    }
    let (pf, pg) = (toeplitz(f, d), toeplitz(g, d));
    let sum_ok = toeplitz(&(f + g), d)
        == (0..d)
            .map(|i| (0..d).map(|j| &pf[i][j] + &pg[i][j]).collect::<Vec<_>>())
            .collect::<Vec<_>>();
    let prod: Vec<Vec<BigInt>> = (0..d)
        .map(|i| (0..d).map(|j| (0..d).map(|t| &pf[i][t] * &pg[t][j]).sum()).collect())
        .collect();
    Ok(sum_ok && toeplitz(&(f * g), d) == prod)
}

/// Determinant as a clow-sequence count: states `[p, h, u]` (parity,
/// current head, current vertex), evaluated as `a^T M^(n-1) b` and compared
/// with elimination.
pub fn mv_det_check(a: &MatF) -> Result<bool, OracleError> {
    if !a.is_square() {
        return Err(OracleError::NotSquare);
    }
    let n = a.rows();
    cap(n, 3)?;
    if n == 0 {
        return Ok(true);
    }
    let ctx = a.ctx();
    let idx = |p: usize, h: usize, u: usize| (p * n + h) * n + u;
    let states = 2 * n * n;
    let mut vec = vec![ctx.zero(); states];
    vec[idx(n % 2, 0, 0)] = ctx.one();
    for _ in 0..n - 1 {
        let mut next = vec![ctx.zero(); states];
        for p in 0..2 {
            for h in 0..n {
                for u in h..n {
                    let cur = &vec[idx(p, h, u)];
                    if cur.is_zero() {
                        continue;
                    }
                    for v in h + 1..n {
                        next[idx(p, h, v)].add_assign(&cur.mul(a.get(u, v)));
                    }
                    for h2 in h + 1..n {
                        next[idx(1 - p, h2, h2)].add_assign(&cur.mul(a.get(u, h)));
                    }
                }
            }
        }
        vec = next;
    }
    let mut total = ctx.zero();
    for p in 0..2 {
        for h in 0..n {
            for u in h..n {
                let close = a.get(u, h);
                let term = vec[idx(p, h, u)].mul(close);
                total = if p == 1 { total.add(&term) } else { total.sub(&term) };
            }
        }
    }
    let det = det_f(a).map_err(|_| OracleError::NotField)?;
    Ok(total == det)
}

/// Context helper for oracle tests over GF(2^d).
pub fn small_field(d: usize) -> RingCtx {
    RingCtx::trinomial(1, d).expect("trinomial exists")
}
