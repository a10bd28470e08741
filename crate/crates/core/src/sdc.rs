//! Shortest cycles through marked edges, shortest pairs of disjoint cycles
//! and shortest pairs of disjoint paths, read off the lowest non-vanishing
//! exponent of sums of pattern-graph permanents.
//!
//! A pattern forces the orientation of every marked edge by deleting all
//! other out-arcs of its source. The reverse arc of a forced edge is removed
//! too, so a marked edge never closes a 2-cycle with itself.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::linalg::Matrix;
use crate::permanent::{perm_mod2, perm_mod2k, MatR, PermError};
use crate::ring::{RingCtx, RingElem, RingError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SdcError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid marked edges: {0}")]
    InvalidMarked(String),
    #[error("need at least two marked edges")]
    TooFewMarked,
    #[error("at most 8 marked edges are supported")]
    TooManyMarked,
    #[error("pattern references a non-terminal")]
    PatternTerminal,
    #[error("invalid terminals: {0}")]
    BadTerminals(String),
    #[error("l must be 1 or 2")]
    BadCycleCount,
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("non-unique optimum")]
    NonUnique,
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: u64,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }
}

/// Simple undirected graph on vertices `0..n` with non-negative weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize, u64)>) -> Result<Self, SdcError> {
        let mut seen = std::collections::HashSet::new();
        for &(u, v, _) in &edges {
            if u >= n || v >= n {
                return Err(SdcError::InvalidGraph(format!("edge {u}-{v} out of range")));
            }
            if u == v {
                return Err(SdcError::InvalidGraph(format!("self-loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(SdcError::InvalidGraph(format!("duplicate edge {u}-{v}")));
            }
        }
        Ok(WeightedGraph {
            n,
            edges: edges.into_iter().map(|(u, v, w)| Edge { u, v, w }).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> Edge {
        self.edges[i]
    }

    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        self.edges
            .iter()
            .position(|e| (e.u == u && e.v == v) || (e.u == v && e.v == u))
    }

    pub fn neighbors(&self, x: usize) -> Vec<usize> {
        self.edges.iter().filter(|e| e.touches(x)).map(|e| e.other(x)).collect()
    }

    pub fn max_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.w).max().unwrap_or(0)
    }

    pub fn with_weights(&self, w: &[u64]) -> WeightedGraph {
        WeightedGraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .zip(w)
                .map(|(e, &w)| Edge { w, ..*e })
                .collect(),
        }
    }

    /// Symmetric 0/1 adjacency as rows of integers.
    pub fn adjacency(&self) -> Vec<Vec<i64>> {
        let mut a = vec![vec![0i64; self.n]; self.n];
        for e in &self.edges {
            a[e.u][e.v] = 1;
            a[e.v][e.u] = 1;
        }
        a
    }
}

/// A graph with an ordered list of marked edges `e_i = (s_i, t_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedInstance {
    graph: WeightedGraph,
    marked: Vec<usize>,
}

pub const MAX_MARKED: usize = 8;

impl MarkedInstance {
    /// Marked edges must be distinct and pairwise vertex-disjoint.
    pub fn new(graph: WeightedGraph, marked: Vec<usize>) -> Result<Self, SdcError> {
        if marked.is_empty() {
            return Err(SdcError::InvalidMarked("no marked edge".into()));
        }
        if marked.len() > MAX_MARKED {
            return Err(SdcError::TooManyMarked);
        }
        let mut used = vec![false; graph.n];
        for &i in &marked {
            let e = graph
                .edges
                .get(i)
                .ok_or_else(|| SdcError::InvalidMarked(format!("edge index {i} out of range")))?;
            for x in [e.u, e.v] {
                if used[x] {
                    return Err(SdcError::InvalidMarked(format!(
                        "marked edges share vertex {x}"
                    )));
                }
                used[x] = true;
            }
        }
        Ok(MarkedInstance { graph, marked })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    pub fn k(&self) -> usize {
        self.marked.len()
    }

    /// `(s_i, t_i)` for each marked edge, as stored in the graph.
    pub fn terminals(&self) -> Vec<(usize, usize)> {
        self.marked
            .iter()
            .map(|&i| (self.graph.edges[i].u, self.graph.edges[i].v))
            .collect()
    }

    pub fn is_terminal(&self, x: usize) -> bool {
        self.marked.iter().any(|&i| self.graph.edges[i].touches(x))
    }

    fn with_graph(&self, graph: WeightedGraph) -> MarkedInstance {
        MarkedInstance {
            graph,
            marked: self.marked.clone(),
        }
    }

    /// The same instance with the marked edges listed in another order.
    pub fn reordered(&self, order: &[usize]) -> MarkedInstance {
        MarkedInstance {
            graph: self.graph.clone(),
            marked: order.iter().map(|&i| self.marked[i]).collect(),
        }
    }

    /// Keeps the edges with `keep[i]`, remapping marked indices.
    fn restrict(&self, keep: &[bool]) -> MarkedInstance {
        let mut remap = vec![usize::MAX; self.graph.m()];
        let mut edges = Vec::new();
        for (i, e) in self.graph.edges.iter().enumerate() {
            if keep[i] {
                remap[i] = edges.len();
                edges.push(*e);
            }
        }
        MarkedInstance {
            graph: WeightedGraph { n: self.graph.n, edges },
            marked: self.marked.iter().map(|&i| remap[i]).collect(),
        }
    }
}

/// A forced arc of a pattern graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternArc {
    pub from: usize,
    pub to: usize,
    pub weight: u64,
}

/// An ordered pairing of terminals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Pattern {
    pub arcs: Vec<PatternArc>,
}

impl Pattern {
    /// `e_1` as `(s_1, t_1)`; `e_i`, `i >= 2`, reversed when bit `i-2` is set.
    pub fn oriented(inst: &MarkedInstance, bits: u64) -> Pattern {
        let g = inst.graph();
        let arcs = inst
            .marked
            .iter()
            .enumerate()
            .map(|(i, &ei)| {
                let e = g.edges[ei];
                let flip = i > 0 && (bits >> (i - 1)) & 1 == 1;
                let (from, to) = if flip { (e.v, e.u) } else { (e.u, e.v) };
                PatternArc { from, to, weight: e.w }
            })
            .collect();
        Pattern { arcs }
    }

    /// `(s_1, s_2)` and `(t_1, t_2)` carrying the weights of `e_1` and
    /// `e_2`; `e_i`, `i >= 3`, reversed when bit `i-3` is set.
    pub fn crossed(inst: &MarkedInstance, bits: u64) -> Pattern {
        let g = inst.graph();
        let e1 = g.edges[inst.marked[0]];
        let e2 = g.edges[inst.marked[1]];
        let mut arcs = vec![
            PatternArc {
                from: e1.u,
                to: e2.u,
                weight: e1.w,
            },
            PatternArc {
                from: e1.v,
                to: e2.v,
                weight: e2.w,
            },
        ];
        for (i, &ei) in inst.marked.iter().enumerate().skip(2) {
            let e = g.edges[ei];
            let flip = (bits >> (i - 2)) & 1 == 1;
            let (from, to) = if flip { (e.v, e.u) } else { (e.u, e.v) };
            arcs.push(PatternArc { from, to, weight: e.w });
        }
        Pattern { arcs }
    }
}

/// Adjacency matrix of the pattern graph: `x^w` per arc, 1 on the diagonal
/// of every non-terminal, and the rows of pattern sources reduced to their
/// forced arc.
pub fn pattern_matrix(inst: &MarkedInstance, pattern: &Pattern, ctx: &RingCtx) -> Result<MatR, SdcError> {
    let g = inst.graph();
    let n = g.n;
    let mut exps: Vec<Vec<Option<u64>>> = vec![vec![None; n]; n];
    for e in &g.edges {
        exps[e.u][e.v] = Some(e.w);
        exps[e.v][e.u] = Some(e.w);
    }
    for x in 0..n {
        if !inst.is_terminal(x) {
            exps[x][x] = Some(0);
        }
    }
    let mut sources = vec![false; n];
    for arc in &pattern.arcs {
        if !inst.is_terminal(arc.from) || !inst.is_terminal(arc.to) || sources[arc.from] {
            return Err(SdcError::PatternTerminal);
        }
        sources[arc.from] = true;
    }
    for arc in &pattern.arcs {
        let real = inst
            .marked
            .iter()
            .any(|&i| g.edges[i].touches(arc.from) && g.edges[i].touches(arc.to));
        for c in 0..n {
            exps[arc.from][c] = None;
        }
        exps[arc.from][arc.to] = Some(arc.weight);
        if real {
            exps[arc.to][arc.from] = None;
        }
    }
    Ok(Matrix::from_fn(ctx, n, n, |i, j| match exps[i][j] {
        Some(w) => ctx.monomial(w as usize),
        None => ctx.zero(),
    }))
}

fn lowest_exponent(e: &RingElem) -> Option<u64> {
    (0..e.ctx().degree()).find(|&i| e.residue(i) != 0).map(|i| i as u64)
}

fn f1_in(inst: &MarkedInstance, ctx: &RingCtx) -> Result<RingElem, SdcError> {
    let count = 1u64 << (inst.k() - 1);
    let vals: Vec<RingElem> = (0..count)
        .into_par_iter()
        .map(|b| Ok(perm_mod2(&pattern_matrix(inst, &Pattern::oriented(inst, b), ctx)?)?))
        .collect::<Result<_, SdcError>>()?;
    Ok(ctx.sum(&vals))
}

fn f2_in(inst: &MarkedInstance, ctx: &RingCtx) -> Result<RingElem, SdcError> {
    let k = inst.k();
    if k < 2 {
        return Err(SdcError::TooFewMarked);
    }
    let mut pats: Vec<(bool, Pattern)> = (0..1u64 << (k - 1)).map(|b| (true, Pattern::oriented(inst, b))).collect();
    pats.extend((0..1u64 << (k - 2)).map(|c| (false, Pattern::crossed(inst, c))));
    let vals: Vec<RingElem> = pats
        .into_par_iter()
        .map(|(plus, p)| {
            let v = perm_mod2k(&pattern_matrix(inst, &p, ctx)?, 2)?;
            Ok(if plus { v } else { v.neg() })
        })
        .collect::<Result<_, SdcError>>()?;
    Ok(ctx.sum(&vals))
}

fn weight_ctx(g: &WeightedGraph, k: u32) -> Result<RingCtx, SdcError> {
    let n = g.n() as u64;
    Ok(RingCtx::trinomial(k, (n * g.max_weight() + 1) as usize)?)
}

/// Sum over the oriented patterns of the pattern permanents, mod 2.
/// Exponent `j` survives iff an odd number of single-cycle covers through
/// all marked edges weigh `j`.
pub fn f1(inst: &MarkedInstance) -> Result<RingElem, SdcError> {
    f1_in(inst, &weight_ctx(inst.graph(), 1)?)
}

/// Oriented-pattern permanents minus crossed-pattern permanents, mod 4.
/// Non-zero terms come from covers with exactly two non-trivial cycles
/// that separate `e_1` and `e_2`.
pub fn f2(inst: &MarkedInstance) -> Result<RingElem, SdcError> {
    if inst.k() < 2 {
        return Err(SdcError::TooFewMarked);
    }
    f2_in(inst, &weight_ctx(inst.graph(), 2)?)
}

/// Per-trial seed derived from the master seed.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    let mut z = master.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(trial + 1));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Multiplier `2nm` separating base weight from the random perturbation.
pub fn weight_scale(g: &WeightedGraph) -> u64 {
    2 * g.n() as u64 * g.m() as u64
}

/// Weights `2nm w(e) + w'(e)`, `w'` uniform in `0..2m`.
pub fn randomize_weights(g: &WeightedGraph, seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = g.m() as u64;
    let scale = weight_scale(g);
    let w: Vec<u64> = g
        .edges
        .iter()
        .map(|e| scale * e.w + rng.gen_range(0..2 * m))
        .collect();
    g.with_weights(&w)
}

/// Degree the modulus must exceed so that no permanent wraps around.
pub fn degree_bound(g: &WeightedGraph) -> usize {
    let n = g.n() as u64;
    let m = g.m() as u64;
    (n * (2 * n * m * g.max_weight() + 2 * m) + 1) as usize
}

fn check_trials(trials: u32) -> Result<(), SdcError> {
    if trials == 0 {
        Err(SdcError::NoTrials)
    } else {
        Ok(())
    }
}

/// Lowest surviving exponent under one weighting, minimised over pairs for
/// two cycles.
fn weighted_value(inst: &MarkedInstance, l: usize, ctx: &RingCtx) -> Result<Option<u64>, SdcError> {
    match l {
        1 => Ok(lowest_exponent(&f1_in(inst, ctx)?)),
        2 => {
            let k = inst.k();
            if k < 2 {
                return Err(SdcError::TooFewMarked);
            }
            let mut pairs = Vec::new();
            for i in 0..k {
                for j in i + 1..k {
                    let mut order = vec![i, j];
                    order.extend((0..k).filter(|&x| x != i && x != j));
                    pairs.push(order);
                }
            }
            let vals: Vec<Option<u64>> = pairs
                .par_iter()
                .map(|o| Ok(lowest_exponent(&f2_in(&inst.reordered(o), ctx)?)))
                .collect::<Result<_, SdcError>>()?;
            Ok(vals.into_iter().flatten().min())
        }
        _ => Err(SdcError::BadCycleCount),
    }
}

/// Best value of a single randomized trial, as base weight.
pub fn trial_value(inst: &MarkedInstance, l: usize, seed: u64) -> Result<Option<u64>, SdcError> {
    let g = inst.graph();
    let ctx = RingCtx::trinomial(l as u32, degree_bound(g))?;
    let weighted = inst.with_graph(randomize_weights(g, seed));
    let scale = weight_scale(g);
    Ok(weighted_value(&weighted, l, &ctx)?.map(|j| j / scale))
}

fn solve(inst: &MarkedInstance, l: usize, seed: u64, trials: u32) -> Result<Option<u64>, SdcError> {
    check_trials(trials)?;
    let vals: Vec<Option<u64>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| trial_value(inst, l, trial_seed(seed, t)))
        .collect::<Result<_, SdcError>>()?;
    Ok(vals.into_iter().flatten().min())
}

/// Weight of a shortest cycle through every marked edge.
pub fn shortest_cycle_through_edges(inst: &MarkedInstance, seed: u64, trials: u32) -> Result<Option<u64>, SdcError> {
    solve(inst, 1, seed, trials)
}

/// Minimum total weight of two vertex-disjoint cycles, each through at
/// least one marked edge, together through all of them.
pub fn shortest_two_disjoint_cycles(inst: &MarkedInstance, seed: u64, trials: u32) -> Result<Option<u64>, SdcError> {
    if inst.k() < 2 {
        return Err(SdcError::TooFewMarked);
    }
    solve(inst, 2, seed, trials)
}

/// Graph with `u1` joined to `s1, t1` and `u2` to `s2, t2` by weight-0
/// edges; the edges `u1 s1` and `u2 s2` are marked.
pub fn sdp2_instance(g: &WeightedGraph, s1: usize, t1: usize, s2: usize, t2: usize) -> Result<MarkedInstance, SdcError> {
    let ts = [s1, t1, s2, t2];
    if ts.iter().any(|&x| x >= g.n()) {
        return Err(SdcError::BadTerminals("terminals not in graph".into()));
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if ts[i] == ts[j] {
                return Err(SdcError::BadTerminals("terminals must be distinct".into()));
            }
        }
    }
    let n = g.n();
    let m = g.m();
    let (u1, u2) = (n, n + 1);
    let mut edges: Vec<(usize, usize, u64)> = g.edges.iter().map(|e| (e.u, e.v, e.w)).collect();
    edges.extend([(u1, s1, 0), (u1, t1, 0), (u2, s2, 0), (u2, t2, 0)]);
    MarkedInstance::new(WeightedGraph::new(n + 2, edges)?, vec![m, m + 2])
}

/// Minimum total weight of vertex-disjoint `s1`-`t1` and `s2`-`t2` paths.
#[allow(clippy::too_many_arguments)]
pub fn solve_sdp2(
    g: &WeightedGraph,
    s1: usize,
    t1: usize,
    s2: usize,
    t2: usize,
    seed: u64,
    trials: u32,
) -> Result<Option<u64>, SdcError> {
    shortest_two_disjoint_cycles(&sdp2_instance(g, s1, t1, s2, t2)?, seed, trials)
}

/// Splits every edge joining two marked vertices with a new vertex; the
/// half at the lower endpoint keeps the weight, the other half weighs 0.
/// Also returns the original index of every new edge.
pub fn split_marked_edges(g: &WeightedGraph, marked: &[usize]) -> (WeightedGraph, Vec<usize>) {
    let mut n = g.n();
    let mut edges = Vec::new();
    let mut origin = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        if marked.contains(&e.u) && marked.contains(&e.v) {
            let z = n;
            n += 1;
            edges.push((e.u, z, e.w));
            edges.push((z, e.v, 0));
            origin.extend([i, i]);
        } else {
            edges.push((e.u, e.v, e.w));
            origin.push(i);
        }
    }
    (WeightedGraph::new(n, edges).expect("splitting keeps the graph simple"), origin)
}

/// One marked-edge instance per choice of distinct neighbours `u_i`, the
/// marked vertex `v_i` becoming the marked edge `v_i u_i` of the split graph.
fn vertex_instances(
    g: &WeightedGraph,
    marked_vertices: &[usize],
    l: usize,
) -> Result<(Vec<usize>, Vec<MarkedInstance>), SdcError> {
    if !(1..=2).contains(&l) {
        return Err(SdcError::BadCycleCount);
    }
    if marked_vertices.iter().any(|&v| v >= g.n()) {
        return Err(SdcError::InvalidMarked("marked vertex out of range".into()));
    }
    if marked_vertices.is_empty() || marked_vertices.len() > MAX_MARKED {
        return Err(SdcError::InvalidMarked("need between 1 and 8 marked vertices".into()));
    }
    if (1..marked_vertices.len()).any(|i| marked_vertices[..i].contains(&marked_vertices[i])) {
        return Err(SdcError::InvalidMarked("repeated marked vertex".into()));
    }
    if l == 2 && marked_vertices.len() < 2 {
        return Err(SdcError::TooFewMarked);
    }
    let (h, origin) = split_marked_edges(g, marked_vertices);
    let choices: Vec<Vec<usize>> = marked_vertices.iter().map(|&v| h.neighbors(v)).collect();
    let mut instances = Vec::new();
    let mut pick = vec![0usize; choices.len()];
    if choices.iter().all(|c| !c.is_empty()) {
        loop {
            let us: Vec<usize> = pick.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            let distinct = us.iter().enumerate().all(|(i, u)| !us[..i].contains(u));
            if distinct {
                let marked: Vec<usize> = marked_vertices
                    .iter()
                    .zip(&us)
                    .map(|(&v, &u)| h.find_edge(v, u).expect("neighbour edge"))
                    .collect();
                instances.push(MarkedInstance::new(h.clone(), marked)?);
            }
            let mut pos = 0;
            while pos < pick.len() {
                pick[pos] += 1;
                if pick[pos] < choices[pos].len() {
                    break;
                }
                pick[pos] = 0;
                pos += 1;
            }
            if pos == pick.len() {
                break;
            }
        }
    }
    Ok((origin, instances))
}

/// Shortest `l` disjoint cycles through marked vertices, each cycle
/// through at least one of them.
pub fn sdce_from_marked_vertices(
    g: &WeightedGraph,
    marked_vertices: &[usize],
    l: usize,
    seed: u64,
    trials: u32,
) -> Result<Option<u64>, SdcError> {
    let (_, instances) = vertex_instances(g, marked_vertices, l)?;
    let vals: Vec<Option<u64>> = instances
        .par_iter()
        .map(|inst| solve(inst, l, seed, trials))
        .collect::<Result<_, SdcError>>()?;
    Ok(vals.into_iter().flatten().min())
}

/// Edge indices (in `g`) of optimal cycles through the marked vertices,
/// trying each neighbour choice and trial seed in turn.
pub fn reconstruct_marked_vertices(
    g: &WeightedGraph,
    marked_vertices: &[usize],
    l: usize,
    target: u64,
    seed: u64,
    trials: u32,
) -> Result<Vec<usize>, SdcError> {
    let (origin, instances) = vertex_instances(g, marked_vertices, l)?;
    for inst in &instances {
        for t in 0..trials as u64 {
            if trial_value(inst, l, trial_seed(seed, t))? != Some(target) {
                continue;
            }
            if let Ok(edges) = reconstruct_cycles(inst, l, target, trial_seed(seed, t)) {
                let mut out: Vec<usize> = edges.into_iter().map(|e| origin[e]).collect();
                out.dedup();
                return Ok(out);
            }
        }
    }
    Err(SdcError::NonUnique)
}

/// Edge indices of the optimal `l` cycles under the weighting of `seed`
/// (a per-trial seed). Unmarked edges whose removal leaves the optimum
/// unchanged are dropped one by one; the survivors are checked to form `l`
/// disjoint cycles of base weight `target`.
pub fn reconstruct_cycles(inst: &MarkedInstance, l: usize, target: u64, seed: u64) -> Result<Vec<usize>, SdcError> {
    if !(1..=2).contains(&l) {
        return Err(SdcError::BadCycleCount);
    }
    let g = inst.graph();
    let ctx = RingCtx::trinomial(l as u32, degree_bound(g))?;
    let weighted = inst.with_graph(randomize_weights(g, seed));
    let scale = weight_scale(g);
    let best = weighted_value(&weighted, l, &ctx)?;
    let Some(j0) = best.filter(|j| j / scale == target) else {
        return Err(SdcError::NonUnique);
    };
    let mut keep = vec![true; g.m()];
    for e in 0..g.m() {
        if inst.marked.contains(&e) {
            continue;
        }
        keep[e] = false;
        if weighted_value(&weighted.restrict(&keep), l, &ctx)? != Some(j0) {
            keep[e] = true;
        }
    }
    let chosen: Vec<usize> = (0..g.m()).filter(|&e| keep[e]).collect();
    if verify_cycles(inst, &chosen, l) != Some(target) {
        return Err(SdcError::NonUnique);
    }
    Ok(chosen)
}

/// Total base weight if `edges` form exactly `l` vertex-disjoint cycles,
/// each containing a marked edge, together containing all of them.
pub fn verify_cycles(inst: &MarkedInstance, edges: &[usize], l: usize) -> Option<u64> {
    let g = inst.graph();
    if inst.marked.iter().any(|e| !edges.contains(e)) {
        return None;
    }
    let mut deg = vec![0usize; g.n()];
    let mut adj = vec![Vec::new(); g.n()];
    for &i in edges {
        let e = g.edges[i];
        deg[e.u] += 1;
        deg[e.v] += 1;
        adj[e.u].push(i);
        adj[e.v].push(i);
    }
    if deg.iter().any(|&d| d != 0 && d != 2) {
        return None;
    }
    let mut seen_edge = vec![false; g.m()];
    let mut cycles = 0;
    for &start in edges {
        if seen_edge[start] {
            continue;
        }
        cycles += 1;
        let mut has_marked = false;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            if seen_edge[i] {
                continue;
            }
            seen_edge[i] = true;
            has_marked |= inst.marked.contains(&i);
            let e = g.edges[i];
            for x in [e.u, e.v] {
                stack.extend(adj[x].iter().copied().filter(|&j| !seen_edge[j]));
            }
        }
        if !has_marked {
            return None;
        }
    }
    if cycles != l {
        return None;
    }
    Some(edges.iter().map(|&i| g.edges[i].w).sum())
}

/// Edge indices (in `g`) of optimal disjoint paths for the given
/// terminals, using the weighting of a per-trial seed.
pub fn reconstruct_sdp2(
    g: &WeightedGraph,
    terminals: [usize; 4],
    target: u64,
    seed: u64,
) -> Result<Vec<usize>, SdcError> {
    let [s1, t1, s2, t2] = terminals;
    let inst = sdp2_instance(g, s1, t1, s2, t2)?;
    let edges = reconstruct_cycles(&inst, 2, target, seed)?;
    Ok(edges.into_iter().filter(|&e| e < g.m()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize, u64)]) -> WeightedGraph {
        WeightedGraph::new(n, edges.to_vec()).unwrap()
    }

    fn triangle() -> WeightedGraph {
        graph(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    }

    fn two_triangles() -> WeightedGraph {
        graph(6, &[(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1)])
    }

    #[test]
    fn graph_validation() {
        assert!(WeightedGraph::new(2, vec![(0, 0, 1)]).is_err());
        assert!(WeightedGraph::new(2, vec![(0, 1, 1), (1, 0, 2)]).is_err());
        assert!(WeightedGraph::new(2, vec![(0, 2, 1)]).is_err());
        let g = graph(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]);
        assert!(MarkedInstance::new(g.clone(), vec![0, 1]).is_err());
        assert!(MarkedInstance::new(g.clone(), vec![0, 2]).is_ok());
        assert!(MarkedInstance::new(g, vec![7]).is_err());
    }

    #[test]
    fn pattern_matrix_triangle() {
        let inst = MarkedInstance::new(triangle(), vec![0]).unwrap();
        let ctx = RingCtx::trinomial(1, 4).unwrap();
        let a = pattern_matrix(&inst, &Pattern::oriented(&inst, 0), &ctx).unwrap();
        assert!(a.get(0, 0).is_zero() && a.get(0, 2).is_zero());
        assert_eq!(*a.get(0, 1), ctx.x());
        assert!(a.get(1, 0).is_zero());
        assert!(a.get(2, 2).is_one());
        let empty = pattern_matrix(&inst, &Pattern::default(), &ctx).unwrap();
        assert_eq!(*empty.get(1, 0), ctx.x());
        assert!(empty.get(0, 0).is_zero());
        let bad = Pattern {
            arcs: vec![PatternArc { from: 2, to: 0, weight: 1 }],
        };
        assert_eq!(pattern_matrix(&inst, &bad, &ctx), Err(SdcError::PatternTerminal));
    }

    #[test]
    fn f1_examples() {
        let inst = MarkedInstance::new(triangle(), vec![0]).unwrap();
        assert_eq!(lowest_exponent(&f1(&inst).unwrap()), Some(3));
        let pendant = graph(4, &[(0, 1, 1), (1, 2, 1), (0, 2, 1), (2, 3, 1)]);
        let inst = MarkedInstance::new(pendant, vec![3]).unwrap();
        assert!(f1(&inst).unwrap().is_zero());
        let bowtie = graph(5, &[(0, 1, 1), (1, 2, 1), (0, 2, 1), (2, 3, 1), (3, 4, 1), (2, 4, 1)]);
        let inst = MarkedInstance::new(bowtie, vec![0, 4]).unwrap();
        assert!(f1(&inst).unwrap().is_zero());
    }

    #[test]
    fn f2_examples() {
        let inst = MarkedInstance::new(two_triangles(), vec![0, 3]).unwrap();
        let f = f2(&inst).unwrap();
        assert_eq!(lowest_exponent(&f), Some(6));
        assert_eq!(f.residue(6), 2);
        let k4 = graph(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)]);
        let inst = MarkedInstance::new(k4, vec![0, 5]).unwrap();
        assert!(f2(&inst).unwrap().is_zero());
        let one = MarkedInstance::new(triangle(), vec![0]).unwrap();
        assert_eq!(f2(&one), Err(SdcError::TooFewMarked));
    }

    #[test]
    fn weights_are_reproducible() {
        let g = graph(3, &[(0, 1, 0), (1, 2, 0), (0, 2, 0)]);
        assert_eq!(randomize_weights(&g, 7), randomize_weights(&g, 7));
        assert!(randomize_weights(&g, 7).edges().iter().all(|e| e.w <= 5));
        let h = randomize_weights(&triangle(), 3);
        assert!(h.edges().iter().all(|e| e.w / weight_scale(&triangle()) == 1));
    }

    #[test]
    fn solver_examples() {
        let inst = MarkedInstance::new(triangle(), vec![0]).unwrap();
        assert_eq!(shortest_cycle_through_edges(&inst, 1, 5).unwrap(), Some(3));
        // 4-cycle 0-1-2-3 with chord 0-2 of weight 2, chord marked
        let g = graph(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1), (0, 2, 2)]);
        let inst = MarkedInstance::new(g, vec![4]).unwrap();
        assert_eq!(shortest_cycle_through_edges(&inst, 1, 5).unwrap(), Some(4));
        let path = graph(3, &[(0, 1, 1), (1, 2, 1)]);
        let inst = MarkedInstance::new(path, vec![0]).unwrap();
        assert_eq!(shortest_cycle_through_edges(&inst, 1, 5).unwrap(), None);
        let inst = MarkedInstance::new(two_triangles(), vec![0, 3]).unwrap();
        assert_eq!(shortest_two_disjoint_cycles(&inst, 1, 5).unwrap(), Some(6));
        let squares = graph(8, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1), (4, 5, 1), (5, 6, 1), (6, 7, 1), (7, 4, 1)]);
        let inst = MarkedInstance::new(squares, vec![0, 4]).unwrap();
        assert_eq!(shortest_two_disjoint_cycles(&inst, 1, 5).unwrap(), Some(8));
        let inst = MarkedInstance::new(triangle(), vec![0]).unwrap();
        assert_eq!(shortest_two_disjoint_cycles(&inst, 1, 5), Err(SdcError::TooFewMarked));
        let inst = MarkedInstance::new(graph(4, &[(0, 1, 1), (1, 2, 1), (2, 0, 1), (2, 3, 1)]), vec![0, 3]).unwrap();
        assert_eq!(shortest_two_disjoint_cycles(&inst, 1, 5).unwrap(), None);
    }

    #[test]
    fn sdp2_examples() {
        let g = graph(4, &[(0, 1, 1), (2, 3, 1)]);
        assert_eq!(solve_sdp2(&g, 0, 1, 2, 3, 9, 5).unwrap(), Some(2));
        assert!(solve_sdp2(&g, 0, 1, 2, 9, 9, 5).is_err());
        assert!(solve_sdp2(&g, 0, 1, 1, 3, 9, 5).is_err());
        // path 0-4-1 (2) and 2-5-6-3 (3)
        let g = graph(7, &[(0, 4, 1), (4, 1, 1), (2, 5, 1), (5, 6, 1), (6, 3, 1)]);
        assert_eq!(solve_sdp2(&g, 0, 1, 2, 3, 4, 5).unwrap(), Some(5));
    }

    #[test]
    fn marked_vertex_examples() {
        assert_eq!(sdce_from_marked_vertices(&triangle(), &[0], 1, 2, 5).unwrap(), Some(3));
        assert_eq!(sdce_from_marked_vertices(&two_triangles(), &[0, 3], 2, 2, 5).unwrap(), Some(6));
        let g = graph(3, &[(0, 1, 1)]);
        assert_eq!(sdce_from_marked_vertices(&g, &[2], 1, 2, 5).unwrap(), None);
        // adjacent marked vertices on a triangle
        assert_eq!(sdce_from_marked_vertices(&triangle(), &[0, 1], 1, 2, 5).unwrap(), Some(3));
        assert_eq!(reconstruct_marked_vertices(&triangle(), &[0, 1], 1, 3, 2, 5).unwrap(), vec![0, 1, 2]);
        assert!(sdce_from_marked_vertices(&triangle(), &[0, 0], 1, 2, 5).is_err());
    }

    #[test]
    fn reconstruction_examples() {
        let inst = MarkedInstance::new(two_triangles(), vec![0, 3]).unwrap();
        let seed = trial_seed(11, 0);
        let mut e = reconstruct_cycles(&inst, 2, 6, seed).unwrap();
        e.sort();
        assert_eq!(e, vec![0, 1, 2, 3, 4, 5]);
        let inst = MarkedInstance::new(triangle(), vec![0]).unwrap();
        assert_eq!(reconstruct_cycles(&inst, 1, 3, seed).unwrap(), vec![0, 1, 2]);
        // 4-cycle 0-1-2-3 and a longer route 1-4-5-2 around it
        let g = graph(6, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1), (1, 4, 1), (4, 5, 1), (5, 2, 1)]);
        let inst = MarkedInstance::new(g, vec![0]).unwrap();
        assert_eq!(reconstruct_cycles(&inst, 1, 4, seed).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(reconstruct_cycles(&inst, 1, 3, seed), Err(SdcError::NonUnique));
    }
}
