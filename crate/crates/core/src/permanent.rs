//! Permanents modulo 2^k over R_k and over Z[x].
//!
//! Mod 2 the permanent is the determinant. For k >= 2 a matrix that is
//! singular mod 2 is reduced to permanents of its (n-1)- and (n-2)-minors
//! mod 2^(k-1); a non-singular one is first turned into a chain of singular
//! matrices by adding a correction `y` to one diagonal entry per step.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::gf2poly::GfPoly;
use crate::linalg::{
    self, det_frac_rows, leading_pivots, normalized_null_vector, pair_minor_sum, regularizing_permutation,
    resolve_fracs, LinalgError, Matrix,
};
use crate::ring::{RingCtx, RingElem, RingError};
use crate::zpoly::ZPoly;

pub type MatR = Matrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("matrix not square")]
    NotSquare,
    #[error("context mismatch: matrix is over k={found}, asked for k={wanted}")]
    KMismatch { found: u32, wanted: u32 },
    #[error("interpolation budget exceeded: {needed} evaluations, budget {budget}")]
    Budget { needed: u128, budget: u64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Square matrix of integer polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZxMatrix {
    n: usize,
    entries: Vec<ZPoly>,
}

impl ZxMatrix {
    pub fn new(n: usize, entries: Vec<ZPoly>) -> Result<Self, PermError> {
        if entries.len() != n * n {
            return Err(PermError::NotSquare);
        }
        Ok(ZxMatrix { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<ZPoly>>) -> Result<Self, PermError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(PermError::NotSquare);
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    /// Rows of polynomial text, e.g. `[["1", "x+1"], ["x", "3"]]`.
    pub fn parse_rows(rows: &[&[&str]]) -> Result<Self, crate::poly_text::ParseError> {
        let parsed: Result<Vec<Vec<ZPoly>>, _> = rows
            .iter()
            .map(|r| r.iter().map(|s| s.parse::<ZPoly>()).collect())
            .collect();
        Ok(Self::from_rows(parsed?).expect("square input"))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &ZPoly {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[ZPoly] {
        &self.entries
    }

    pub fn max_deg(&self) -> usize {
        self.entries.iter().filter_map(|e| e.degree()).max().unwrap_or(0)
    }

    pub fn to_ring(&self, ctx: &RingCtx) -> MatR {
        Matrix::from_fn(ctx, self.n, self.n, |i, j| ctx.from_zpoly(self.get(i, j)))
    }
}

fn check_square(a: &MatR) -> Result<(), PermError> {
    if a.is_square() {
        Ok(())
    } else {
        Err(PermError::NotSquare)
    }
}

/// Permanent mod 2, i.e. the determinant over F.
pub fn perm_mod2(a: &MatR) -> Result<RingElem, PermError> {
    check_square(a)?;
    if a.ctx().k() != 1 {
        return Err(PermError::KMismatch {
            found: a.ctx().k(),
            wanted: 1,
        });
    }
    Ok(linalg::det_f(a)?)
}

/// Permanent of a matrix over R_k, modulo (2^k, p).
pub fn perm_mod2k(a: &MatR, k: u32) -> Result<RingElem, PermError> {
    check_square(a)?;
    if a.ctx().k() != k {
        return Err(PermError::KMismatch {
            found: a.ctx().k(),
            wanted: k,
        });
    }
    perm_rec(a)
}

fn perm_rec(a: &MatR) -> Result<RingElem, PermError> {
    let n = a.rows();
    let ctx = a.ctx();
    match n {
        0 => return Ok(ctx.one()),
        1 => return Ok(a.get(0, 0).clone()),
        _ => {}
    }
    if ctx.k() == 1 {
        return Ok(linalg::det_f(a)?);
    }
    let (num, _) = det_frac_rows(ctx.modulus(), a.project_mod2().gf_rows()?);
    if num.is_zero() {
        singular(a)
    } else {
        nonsingular(a)
    }
}

/// Row order and diagonal corrections used for a matrix that is
/// non-singular mod 2. `y[m-1]` is the correction for the leading `m x m`
/// block of the reordered matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionChain {
    pub order: Vec<usize>,
    pub y: Vec<RingElem>,
}

pub fn substitution_chain(a: &MatR) -> Result<SubstitutionChain, PermError> {
    check_square(a)?;
    let abar = a.project_mod2();
    let order = regularizing_permutation(&abar)?;
    let y = leading_pivots(&abar.permute_rows(&order))?;
    Ok(SubstitutionChain { order, y })
}

fn nonsingular(a: &MatR) -> Result<RingElem, PermError> {
    let k = a.ctx().k();
    let n = a.rows();
    let chain = substitution_chain(a)?;
    let b = a.permute_rows(&chain.order);
    let lifted: Vec<RingElem> = chain.y.iter().map(|y| y.lift(k)).collect();
    let corrected: Vec<RingElem> = (2..=n)
        .into_par_iter()
        .map(|m| {
            let mut c = b.leading(m);
            let v = c.get(m - 1, m - 1).add(&lifted[m - 1]);
            c.set(m - 1, m - 1, v);
            singular(&c)
        })
        .collect::<Result<_, _>>()?;
    let mut acc = b.get(0, 0).clone();
    for m in 2..=n {
        acc = corrected[m - 2].sub(&lifted[m - 1].mul(&acc));
    }
    Ok(acc)
}

/// perm(A) for A singular mod 2 and k >= 2.
fn singular(a: &MatR) -> Result<RingElem, PermError> {
    let ctx = a.ctx().clone();
    let k = ctx.k();
    let n = a.rows();
    let Some((first, mut v)) = normalized_null_vector(&a.project_mod2().transpose())? else {
        unreachable!("matrix is singular mod 2");
    };
    let mut a = a.clone();
    a.swap_rows(0, first);
    v.swap(0, first);
    let vl: Vec<RingElem> = v.iter().map(|e| e.lift(k)).collect();
    let b: Vec<RingElem> = (0..n)
        .map(|j| {
            let mut s = ctx.zero();
            for (i, vi) in vl.iter().enumerate() {
                if !vi.is_zero() {
                    s.add_assign(&vi.mul(a.get(i, j)));
                }
            }
            s.halve_even()
        })
        .collect::<Result<_, _>>()?;
    let half = if k == 2 {
        singular_sums_field(&a, &v, &b)?
    } else {
        singular_sums(&a, &v, &b)?
    };
    Ok(half.double_lift())
}

/// `s1 - s2` mod 2^(k-1) by recursion on the minors.
fn singular_sums(a: &MatR, v: &[RingElem], b: &[RingElem]) -> Result<RingElem, PermError> {
    let n = a.rows();
    let k1 = a.ctx().k() - 1;
    let ar = a.reduce_to(k1);
    let ctx1 = ar.ctx().clone();
    let s1: Vec<RingElem> = (0..n)
        .into_par_iter()
        .filter(|&j| !b[j].is_zero())
        .map(|j| Ok(b[j].mul(&perm_rec(&ar.minor(&[0], &[j]))?)))
        .collect::<Result<_, PermError>>()?;
    let mut jobs = Vec::new();
    for (i, vi) in v.iter().enumerate().skip(1) {
        if vi.is_zero() {
            continue;
        }
        let vi = vi.lift(k1);
        for j in 0..n {
            for l in j + 1..n {
                let coef = ar.get(i, j).mul(ar.get(i, l));
                if !coef.is_zero() {
                    jobs.push((i, j, l, vi.mul(&coef)));
                }
            }
        }
    }
    let s2: Vec<RingElem> = jobs
        .into_par_iter()
        .map(|(i, j, l, coef)| Ok(coef.mul(&perm_rec(&ar.minor(&[0, i], &[j, l]))?)))
        .collect::<Result<_, PermError>>()?;
    Ok(ctx1.sum(&s1).sub(&ctx1.sum(&s2)))
}

/// `s1 - s2` mod 2, where every inner permanent is a determinant over F.
/// `s1` is the determinant of A with row 0 replaced by b; each inner sum of
/// `s2` is a sum of pair-deleted minors weighted by a quadratic in row i.
fn singular_sums_field(a: &MatR, v: &[RingElem], b: &[RingElem]) -> Result<RingElem, PermError> {
    let n = a.rows();
    let ctx = a.ctx();
    let m = ctx.modulus();
    let rows = a.project_mod2().gf_rows()?;
    let mut first = rows.clone();
    first[0] = b.iter().map(|e| e.to_gf()).collect();
    let mut jobs: Vec<usize> = (1..n).filter(|&i| !v[i].is_zero()).collect();
    jobs.insert(0, 0);
    let fracs: Vec<(GfPoly, GfPoly)> = jobs
        .par_iter()
        .map(|&i| {
            if i == 0 {
                return det_frac_rows(m, first.clone());
            }
            let rest: Vec<Vec<GfPoly>> = (1..n).filter(|&r| r != i).map(|r| rows[r].clone()).collect();
            let (num, den) = pair_minor_sum(m, rest, &rows[i]);
            (m.mul(&num, &v[i].to_gf()), den)
        })
        .collect();
    let vals = resolve_fracs(ctx, &fracs)?;
    // characteristic 2: s1 - s2 = s1 + s2
    Ok(ctx.field().sum(&vals))
}

/// Permanent of an integer polynomial matrix with coefficients mod 2^k.
/// The modulus degree exceeds `n * max_deg`, so no reduction mod p occurs.
pub fn perm_zx_mod2k(a: &ZxMatrix, k: u32) -> Result<ZPoly, PermError> {
    let bound = a.n() * a.max_deg() + 1;
    let ctx = RingCtx::trinomial(k, bound)?;
    Ok(perm_mod2k(&a.to_ring(&ctx), k)?.to_zpoly())
}

pub const DEFAULT_INTERPOLATION_BUDGET: u64 = 1_000_000;

/// Lifts of every element of F* with 0/1 residues.
fn units(ctx: &RingCtx) -> Vec<RingElem> {
    let d = ctx.degree();
    assert!(d < 32, "field too large to enumerate");
    (1u64..(1 << d)).map(|bits| ctx.from_gf(&GfPoly::from_u64(bits))).collect()
}

fn for_each_tuple(len: usize, base: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; len];
    loop {
        f(&idx);
        let mut pos = 0;
        loop {
            if pos == len {
                return;
            }
            idx[pos] += 1;
            if idx[pos] < base {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Products `a_1 ... a_T` over every T-tuple of lifted F* elements,
/// `T = 2^(k-1)`.
fn tuple_products(ctx: &RingCtx) -> Vec<RingElem> {
    let u = units(ctx);
    let t = 1usize << (ctx.k() - 1);
    let mut out = Vec::with_capacity(u.len().pow(t as u32));
    for_each_tuple(t, u.len(), |idx| {
        let mut p = ctx.one();
        for &i in idx {
            p = p.mul(&u[i]);
        }
        out.push(p);
    });
    out
}

/// `sum over T-tuples of F* of (a_1 ... a_T)^m`, `T = 2^(k-1)`, in R_k.
/// Equals 1 when `q-1` divides `m` and 0 otherwise.
pub fn power_sum(ctx: &RingCtx, m: u64) -> RingElem {
    let terms: Vec<RingElem> = tuple_products(ctx).iter().map(|b| b.pow(m)).collect();
    ctx.sum(&terms)
}

fn eval_at(p: &ZPoly, b: &RingElem) -> RingElem {
    let ctx = b.ctx();
    let mut acc = ctx.zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(b).add(&ctx.from_zpoly(&ZPoly::from_coeffs(vec![c.clone()])));
    }
    acc
}

/// Permanent mod 2^k recovered coefficient by coefficient from evaluations
/// at products of field units: `c_t = sum b^(q-1-t) perm(A(b))`.
pub fn perm_interpolate(a: &ZxMatrix, k: u32, budget: u64) -> Result<ZPoly, PermError> {
    let n_coeffs = a.n() * a.max_deg() + 1;
    // smallest trinomial field with q >= N + 2
    let mut min_deg = 1;
    while (1u128 << min_deg) < n_coeffs as u128 + 2 {
        min_deg += 1;
    }
    let ctx = RingCtx::trinomial(k, min_deg)?;
    let d = ctx.degree();
    let q_minus_1 = (1u128 << d) - 1;
    let tuples = 1u32 << (k - 1);
    let needed = q_minus_1.checked_pow(tuples).unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(PermError::Budget { needed, budget });
    }
    let q1 = q_minus_1 as u64;
    let products = tuple_products(&ctx);
    let partials: Vec<Vec<RingElem>> = products
        .par_iter()
        .map(|b| {
            let m = Matrix::from_fn(&ctx, a.n(), a.n(), |i, j| eval_at(a.get(i, j), b));
            let f = perm_rec(&m)?;
            // b^(q-1-t) for t = N-1 down to 0
            let mut pw = b.pow_big(&BigUint::from(q1 + 1 - n_coeffs as u64));
            let mut out = vec![ctx.zero(); n_coeffs];
            for t in (0..n_coeffs).rev() {
                out[t] = pw.mul(&f);
                pw = pw.mul(b);
            }
            Ok(out)
        })
        .collect::<Result<_, PermError>>()?;
    let mut coeffs = vec![ctx.zero(); n_coeffs];
    for part in &partials {
        for (c, p) in coeffs.iter_mut().zip(part) {
            c.add_assign(p);
        }
    }
    let ints: Vec<num_bigint::BigInt> = coeffs
        .iter()
        .map(|c| {
            debug_assert!((1..d).all(|i| c.residue(i) == 0), "coefficient sum is a constant");
            num_bigint::BigInt::from(c.residue(0))
        })
        .collect();
    Ok(ZPoly::from_coeffs(ints))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1() -> ZxMatrix {
        ZxMatrix::parse_rows(&[&["1", "x+1", "x+2"], &["x", "x^2", "x^2+x"], &["x^2", "3", "x^2+3"]]).unwrap()
    }

    fn example2() -> ZxMatrix {
        ZxMatrix::parse_rows(&[&["1", "x", "x^2"], &["x", "x^2", "1"], &["1", "x^2", "x"]]).unwrap()
    }

    fn ctx(k: u32) -> RingCtx {
        RingCtx::new(k, "x^6+x^3+1".parse().unwrap()).unwrap()
    }

    #[test]
    fn worked_examples() {
        let c = ctx(2);
        assert_eq!(perm_mod2k(&example1().to_ring(&c), 2).unwrap().to_string(), "2x^5+2x^4+2x^3");
        // the full expansion has a 2x^3 term, which survives mod 4
        assert_eq!(perm_mod2k(&example2().to_ring(&c), 2).unwrap().to_string(), "x^5+x^4+2x^3+x^2+x");
        assert_eq!(perm_mod2k(&example2().to_ring(&ctx(1)), 1).unwrap().to_string(), "x^5+x^4+x^2+x");
        assert_eq!(perm_zx_mod2k(&example1(), 2).unwrap().to_string(), "2x^5+2x^4+2x^3");
        assert!(perm_mod2(&example1().to_ring(&ctx(1))).unwrap().is_zero());
    }

    #[test]
    fn second_example_chain() {
        let ch = substitution_chain(&example2().to_ring(&ctx(2))).unwrap();
        assert_eq!(ch.order, vec![0, 2, 1]);
        assert_eq!(ch.y[2].to_string(), "x^3+1");
        assert_eq!(ch.y[1].to_string(), "x^2+x");
    }

    #[test]
    fn small_anchors() {
        for k in 1..=4 {
            let c = ctx(k);
            assert!(perm_mod2k(&Matrix::identity(&c, 4), k).unwrap().is_one());
            assert!(perm_mod2k(&Matrix::zeros(&c, 0, 0), k).unwrap().is_one());
        }
        let one = ZxMatrix::parse_rows(&[&["9x^2-3"]]).unwrap();
        assert_eq!(perm_zx_mod2k(&one, 3).unwrap().to_string(), "x^2+5");
        let eq = Matrix::from_fn(&ctx(1), 2, 2, |_, j| ctx(1).from_zpoly(&["x", "x+1"][j].parse().unwrap()));
        assert!(perm_mod2(&eq).unwrap().is_zero());
        assert!(matches!(perm_mod2k(&Matrix::identity(&ctx(2), 2), 3), Err(PermError::KMismatch { .. })));
    }

    #[test]
    fn interpolation_small() {
        let a = ZxMatrix::parse_rows(&[&["x", "1"], &["1", "x"]]).unwrap();
        assert_eq!(perm_interpolate(&a, 2, DEFAULT_INTERPOLATION_BUDGET).unwrap().to_string(), "x^2+1");
        assert_eq!(
            perm_interpolate(&example1(), 1, DEFAULT_INTERPOLATION_BUDGET).unwrap(),
            perm_zx_mod2k(&example1(), 1).unwrap()
        );
        assert!(matches!(perm_interpolate(&example1(), 3, 1000), Err(PermError::Budget { .. })));
    }

    #[test]
    fn power_sums_gf4() {
        for k in 1..=3 {
            let c = RingCtx::new(k, "x^2+x+1".parse().unwrap()).unwrap();
            for m in 0..=6 {
                let s = power_sum(&c, m);
                assert_eq!(s.is_one(), m % 3 == 0, "k={k} m={m}");
                assert!(s.is_one() || s.is_zero(), "k={k} m={m} {s}");
            }
        }
    }
}
