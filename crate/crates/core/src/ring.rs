//! The rings R_k = Z[x]/(2^k, p(x)) for an irreducible p over GF(2).
//!
//! For k = 1 elements are packed GF(2) polynomials (the field F); for k >= 2
//! they are `deg p` residues stored in machine words and masked to 2^k.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::gf2poly::{GfPoly, Modulus};
use crate::zpoly::ZPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("context mismatch")]
    ContextMismatch,
    #[error("zero inverse")]
    ZeroInverse,
    #[error("not a field")]
    NotAField,
    #[error("element not even")]
    NotEven,
    #[error("k must be between 1 and 63, got {0}")]
    BadExponent(u32),
    #[error("modulus is not irreducible")]
    Reducible,
    #[error("modulus degree too small")]
    DegreeTooSmall,
}

/// Shared description of R_k: the exponent k and the modulus p.
#[derive(Clone)]
pub struct RingCtx {
    k: u32,
    modulus: Arc<Modulus>,
}

impl PartialEq for RingCtx {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k
            && (Arc::ptr_eq(&self.modulus, &other.modulus) || self.modulus == other.modulus)
    }
}

impl Eq for RingCtx {}

impl fmt::Debug for RingCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R_{}[{}]", self.k, self.modulus.poly())
    }
}

impl RingCtx {
    pub fn new(k: u32, p: GfPoly) -> Result<Self, RingError> {
        match p.is_irreducible() {
            Ok(true) => {}
            Ok(false) => return Err(RingError::Reducible),
            Err(_) => return Err(RingError::DegreeTooSmall),
        }
        Self::new_unchecked(k, p)
    }

    /// Context over `x^(2*3^l)+x^(3^l)+1` of degree at least `min_degree`.
    /// The family is irreducible, so no test is run.
    pub fn trinomial(k: u32, min_degree: usize) -> Result<Self, RingError> {
        Self::new_unchecked(k, GfPoly::select_trinomial(min_degree))
    }

    fn new_unchecked(k: u32, p: GfPoly) -> Result<Self, RingError> {
        if !(1..=63).contains(&k) {
            return Err(RingError::BadExponent(k));
        }
        let modulus = Modulus::new(p).map_err(|_| RingError::DegreeTooSmall)?;
        if modulus.degree() == 0 {
            return Err(RingError::DegreeTooSmall);
        }
        Ok(RingCtx {
            k,
            modulus: Arc::new(modulus),
        })
    }

    /// Same modulus, different exponent.
    pub fn with_k(&self, k: u32) -> RingCtx {
        assert!((1..=63).contains(&k), "k out of range");
        RingCtx {
            k,
            modulus: Arc::clone(&self.modulus),
        }
    }

    pub fn field(&self) -> RingCtx {
        self.with_k(1)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree()
    }

    pub fn p(&self) -> &GfPoly {
        self.modulus.poly()
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn is_field(&self) -> bool {
        self.k == 1
    }

    fn mask(&self) -> u64 {
        (1u64 << self.k) - 1
    }

    pub fn zero(&self) -> RingElem {
        let repr = if self.k == 1 {
            Repr::Bits(GfPoly::zero())
        } else {
            Repr::Res(vec![0; self.degree()])
        };
        RingElem {
            ctx: self.clone(),
            repr,
        }
    }

    pub fn one(&self) -> RingElem {
        self.monomial(0)
    }

    pub fn x(&self) -> RingElem {
        self.monomial(1)
    }

    /// `x^e` reduced mod p.
    pub fn monomial(&self, e: usize) -> RingElem {
        if self.k == 1 {
            return self.from_gf(&GfPoly::monomial(e));
        }
        let mut r = vec![0u64; e.max(self.degree()) + 1];
        r[e] = 1;
        self.from_wide(r)
    }

    /// Integer constant, taken mod 2^k.
    pub fn constant(&self, c: i64) -> RingElem {
        self.from_zpoly(&ZPoly::constant(c))
    }

    /// Interprets a GF(2) polynomial with 0/1 residues.
    pub fn from_gf(&self, a: &GfPoly) -> RingElem {
        if self.k == 1 {
            return RingElem {
                ctx: self.clone(),
                repr: Repr::Bits(self.modulus.reduce(a.clone())),
            };
        }
        let len = a.degree().map_or(0, |d| d + 1);
        let mut r = vec![0u64; len.max(self.degree())];
        for e in a.exponents() {
            r[e] = 1;
        }
        self.from_wide(r)
    }

    pub fn from_zpoly(&self, a: &ZPoly) -> RingElem {
        let m = BigInt::from(1u64) << self.k;
        let mut r = vec![0u64; a.coeffs().len().max(self.degree())];
        for (i, c) in a.coeffs().iter().enumerate() {
            let c = ((c % &m) + &m) % &m;
            r[i] = c.to_u64().expect("residue fits");
        }
        self.from_wide(r)
    }

    /// Residues of arbitrary length (constant term first), reduced mod 2^k and p.
    pub fn from_residues(&self, r: &[u64]) -> RingElem {
        let mut v = r.to_vec();
        if v.len() < self.degree() {
            v.resize(self.degree(), 0);
        }
        self.from_wide(v)
    }

    fn from_wide(&self, mut r: Vec<u64>) -> RingElem {
        if self.k == 1 {
            let mut words = vec![0u64; r.len().div_ceil(64)];
            for (i, c) in r.iter().enumerate() {
                if c & 1 == 1 {
                    words[i / 64] |= 1 << (i % 64);
                }
            }
            return RingElem {
                ctx: self.clone(),
                repr: Repr::Bits(GfPoly::from_words(self.modulus.reduce_words(words))),
            };
        }
        reduce_residues(&mut r, &self.modulus, self.mask());
        RingElem {
            ctx: self.clone(),
            repr: Repr::Res(r),
        }
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a RingElem>) -> RingElem {
        let mut acc = self.zero();
        for it in items {
            acc.add_assign(it);
        }
        acc
    }
}

/// Folds residues at index >= d down with x^d = -sum x^e, then masks.
fn reduce_residues(r: &mut Vec<u64>, m: &Modulus, mask: u64) {
    let d = m.degree();
    for i in (d..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        r[i] = 0;
        for &e in m.low_terms() {
            r[i - d + e] = r[i - d + e].wrapping_sub(c);
        }
    }
    r.truncate(d);
    for c in r.iter_mut() {
        *c &= mask;
    }
}

const KARATSUBA_CUTOFF: usize = 32;

/// `out += a * b` over Z/2^64, `out.len() >= a.len() + b.len() - 1`.
fn mul_acc_wrapping(a: &[u64], b: &[u64], out: &mut [u64]) {
    if a.len() < b.len() {
        return mul_acc_wrapping(b, a, out);
    }
    if b.is_empty() {
        return;
    }
    if b.len() < KARATSUBA_CUTOFF {
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = out[i + j].wrapping_add(x.wrapping_mul(y));
            }
        }
        return;
    }
    if a.len() != b.len() {
        let mut start = 0;
        while start < a.len() {
            let end = (start + b.len()).min(a.len());
            mul_acc_wrapping(&a[start..end], b, &mut out[start..]);
            start = end;
        }
        return;
    }
    let n = a.len();
    let h = n / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let mut z0 = vec![0u64; 2 * h];
    mul_acc_wrapping(a0, b0, &mut z0);
    let mut z2 = vec![0u64; 2 * (n - h)];
    mul_acc_wrapping(a1, b1, &mut z2);
    let sa: Vec<u64> = (0..n - h)
        .map(|i| a1[i].wrapping_add(a0.get(i).copied().unwrap_or(0)))
        .collect();
    let sb: Vec<u64> = (0..n - h)
        .map(|i| b1[i].wrapping_add(b0.get(i).copied().unwrap_or(0)))
        .collect();
    let mut z1 = vec![0u64; 2 * (n - h)];
    mul_acc_wrapping(&sa, &sb, &mut z1);
    for (i, c) in z1.iter_mut().enumerate() {
        *c = c
            .wrapping_sub(z0.get(i).copied().unwrap_or(0))
            .wrapping_sub(z2[i]);
    }
    let add_at = |out: &mut [u64], off: usize, src: &[u64]| {
        for (i, &s) in src.iter().enumerate() {
            if off + i < out.len() {
                out[off + i] = out[off + i].wrapping_add(s);
            }
        }
    };
    add_at(out, 0, &z0);
    add_at(out, h, &z1);
    add_at(out, 2 * h, &z2);
}

fn mul_residues(a: &[u64], b: &[u64]) -> Vec<u64> {
    let nz = |v: &[u64]| v.iter().filter(|&&c| c != 0).count();
    let (na, nb) = (nz(a), nz(b));
    let mut out = vec![0u64; a.len() + b.len()];
    if na == 0 || nb == 0 {
        return out;
    }
    let (sparse, dense, ns) = if na <= nb { (a, b, na) } else { (b, a, nb) };
    if ns <= KARATSUBA_CUTOFF || dense.len() < 2 * KARATSUBA_CUTOFF {
        for (i, &x) in sparse.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in dense.iter().enumerate() {
                out[i + j] = out[i + j].wrapping_add(x.wrapping_mul(y));
            }
        }
    } else {
        mul_acc_wrapping(a, b, &mut out);
    }
    out
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Bits(GfPoly),
    Res(Vec<u64>),
}

/// An element of R_k, tagged with its context.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElem {
    ctx: RingCtx,
    repr: Repr,
}

impl RingElem {
    pub fn ctx(&self) -> &RingCtx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Bits(g) => g.is_zero(),
            Repr::Res(r) => r.iter().all(|&c| c == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Bits(g) => g.is_one(),
            Repr::Res(r) => r[0] == 1 && r[1..].iter().all(|&c| c == 0),
        }
    }

    /// Residue of the coefficient of `x^i`, in `[0, 2^k)`.
    pub fn residue(&self, i: usize) -> u64 {
        match &self.repr {
            Repr::Bits(g) => u64::from(g.coeff(i)),
            Repr::Res(r) => r.get(i).copied().unwrap_or(0),
        }
    }

    /// All `deg p` residues, constant term first.
    pub fn residues(&self) -> Vec<u64> {
        (0..self.ctx.degree()).map(|i| self.residue(i)).collect()
    }

    /// The field element, for k = 1.
    pub fn as_gf(&self) -> Option<&GfPoly> {
        match &self.repr {
            Repr::Bits(g) => Some(g),
            Repr::Res(_) => None,
        }
    }

    /// Residues mod 2 as a GF(2) polynomial (valid for every k).
    pub fn to_gf(&self) -> GfPoly {
        match &self.repr {
            Repr::Bits(g) => g.clone(),
            Repr::Res(r) => {
                let mut words = vec![0u64; r.len().div_ceil(64)];
                for (i, c) in r.iter().enumerate() {
                    if c & 1 == 1 {
                        words[i / 64] |= 1 << (i % 64);
                    }
                }
                GfPoly::from_words(words)
            }
        }
    }

    pub fn to_zpoly(&self) -> ZPoly {
        ZPoly::from_coeffs(self.residues().into_iter().map(BigInt::from).collect())
    }

    fn check(&self, other: &RingElem) -> Result<(), RingError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(RingError::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &RingElem) -> Result<RingElem, RingError> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    pub fn checked_sub(&self, other: &RingElem) -> Result<RingElem, RingError> {
        self.check(other)?;
        Ok(self.add(&other.neg()))
    }

    pub fn checked_mul(&self, other: &RingElem) -> Result<RingElem, RingError> {
        self.check(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Bits(a), Repr::Bits(b)) => Repr::Bits(self.ctx.modulus.mul(a, b)),
            (Repr::Res(a), Repr::Res(b)) => {
                let mut r = mul_residues(a, b);
                reduce_residues(&mut r, &self.ctx.modulus, self.ctx.mask());
                Repr::Res(r)
            }
            _ => unreachable!("representation follows k"),
        };
        Ok(RingElem {
            ctx: self.ctx.clone(),
            repr,
        })
    }

    /// In-place sum; panics on mismatched contexts.
    pub fn add_assign(&mut self, other: &RingElem) {
        assert!(self.ctx == other.ctx, "context mismatch");
        let mask = self.ctx.mask();
        match (&mut self.repr, &other.repr) {
            (Repr::Bits(a), Repr::Bits(b)) => *a = a.add(b),
            (Repr::Res(a), Repr::Res(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x = x.wrapping_add(*y) & mask;
                }
            }
            _ => unreachable!("representation follows k"),
        }
    }

    pub fn add(&self, other: &RingElem) -> RingElem {
        self.checked_add(other).expect("context mismatch")
    }

    pub fn sub(&self, other: &RingElem) -> RingElem {
        self.checked_sub(other).expect("context mismatch")
    }

    pub fn mul(&self, other: &RingElem) -> RingElem {
        self.checked_mul(other).expect("context mismatch")
    }

    pub fn neg(&self) -> RingElem {
        let mask = self.ctx.mask();
        match &self.repr {
            Repr::Bits(_) => self.clone(),
            Repr::Res(r) => RingElem {
                ctx: self.ctx.clone(),
                repr: Repr::Res(r.iter().map(|c| c.wrapping_neg() & mask).collect()),
            },
        }
    }

    pub fn square(&self) -> RingElem {
        match &self.repr {
            Repr::Bits(a) => RingElem {
                ctx: self.ctx.clone(),
                repr: Repr::Bits(self.ctx.modulus.square(a)),
            },
            Repr::Res(_) => self.mul(self),
        }
    }

    pub fn pow(&self, mut e: u64) -> RingElem {
        let mut base = self.clone();
        let mut acc = self.ctx.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Power with an arbitrary-size exponent.
    pub fn pow_big(&self, e: &num_bigint::BigUint) -> RingElem {
        let mut acc = self.ctx.one();
        for i in (0..e.bits()).rev() {
            acc = acc.square();
            if e.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }

    fn square_times(&self, times: usize) -> RingElem {
        let mut a = self.clone();
        for _ in 0..times {
            a = a.square();
        }
        a
    }

    /// `a^(q-2)` with `q = 2^deg p`, via an addition chain on the exponent
    /// `2^(d-1) - 1` followed by one squaring.
    pub fn field_inverse(&self) -> Result<RingElem, RingError> {
        if !self.ctx.is_field() {
            return Err(RingError::NotAField);
        }
        if self.is_zero() {
            return Err(RingError::ZeroInverse);
        }
        let d = self.ctx.degree();
        if d == 1 {
            return Ok(self.clone());
        }
        // beta_r = a^(2^r - 1); beta_(r+s) = beta_r^(2^s) * beta_s
        let target = d - 1;
        let mut beta = self.clone();
        let mut r = 1usize;
        let top = usize::BITS - 1 - target.leading_zeros();
        for bit in (0..top).rev() {
            beta = beta.square_times(r).mul(&beta);
            r *= 2;
            if (target >> bit) & 1 == 1 {
                beta = beta.square().mul(self);
                r += 1;
            }
        }
        debug_assert_eq!(r, target);
        Ok(beta.square())
    }

    /// Reduction of every residue mod 2^j, for `j <= k`.
    pub fn reduce_to(&self, j: u32) -> RingElem {
        assert!(j >= 1 && j <= self.ctx.k, "cannot reduce to a larger k");
        let ctx = self.ctx.with_k(j);
        if j == 1 {
            return RingElem {
                repr: Repr::Bits(self.to_gf()),
                ctx,
            };
        }
        let mask = ctx.mask();
        let r = match &self.repr {
            Repr::Res(r) => r.iter().map(|c| c & mask).collect(),
            Repr::Bits(_) => unreachable!("j <= k"),
        };
        RingElem {
            ctx,
            repr: Repr::Res(r),
        }
    }

    pub fn project_mod2(&self) -> RingElem {
        self.reduce_to(1)
    }

    /// The same residues read in R_j, `j >= k`.
    pub fn lift(&self, j: u32) -> RingElem {
        assert!(j >= self.ctx.k, "cannot lift to a smaller k");
        let ctx = self.ctx.with_k(j);
        if j == self.ctx.k {
            return self.clone();
        }
        RingElem {
            repr: Repr::Res(self.residues()),
            ctx,
        }
    }

    /// `2 * lift(a)` in R_(k+1); well defined for `a` taken mod 2^k.
    pub fn double_lift(&self) -> RingElem {
        let ctx = self.ctx.with_k(self.ctx.k + 1);
        RingElem {
            repr: Repr::Res(self.residues().into_iter().map(|c| c << 1).collect()),
            ctx,
        }
    }

    /// `a / 2` in R_(k-1), for `a` with all residues even.
    pub fn halve_even(&self) -> Result<RingElem, RingError> {
        if self.ctx.k == 1 {
            return Err(RingError::NotAField);
        }
        let r = self.residues();
        if r.iter().any(|c| c & 1 == 1) {
            return Err(RingError::NotEven);
        }
        let ctx = self.ctx.with_k(self.ctx.k - 1);
        let halves: Vec<u64> = r.into_iter().map(|c| c >> 1).collect();
        Ok(ctx.from_residues(&halves))
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Bits(g) => write!(f, "{g}"),
            Repr::Res(_) => write!(f, "{}", self.to_zpoly()),
        }
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {:?}", self.ctx)
    }
}

/// `sum of v_i` for a non-empty slice.
pub fn ring_sum(items: &[RingElem]) -> Result<RingElem, RingError> {
    let first = items.first().ok_or(RingError::ContextMismatch)?;
    let mut acc = first.ctx.zero();
    for it in items {
        acc = acc.checked_add(it)?;
    }
    Ok(acc)
}

/// Inverse of a non-zero element of F computed with Montgomery's trick:
/// one field inversion and `3(n-1)` multiplications for the whole batch.
pub fn batch_inverse(items: &[RingElem]) -> Result<Vec<RingElem>, RingError> {
    if items.is_empty() {
        return Ok(Vec::new());
    }
    let mut prefix = Vec::with_capacity(items.len());
    let mut acc = items[0].clone();
    prefix.push(acc.clone());
    for it in &items[1..] {
        acc = acc.checked_mul(it)?;
        prefix.push(acc.clone());
    }
    let mut inv = acc.field_inverse()?;
    let mut out = vec![items[0].ctx.zero(); items.len()];
    for i in (1..items.len()).rev() {
        out[i] = inv.mul(&prefix[i - 1]);
        inv = inv.mul(&items[i]);
    }
    out[0] = inv;
    Ok(out)
}

/// Convenience for tests and callers holding integer residues.
pub fn elem_from_i64s(ctx: &RingCtx, coeffs: &[i64]) -> RingElem {
    ctx.from_zpoly(&ZPoly::from_i64s(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(k: u32, p: &str) -> RingCtx {
        RingCtx::new(k, p.parse().unwrap()).unwrap()
    }

    fn el(c: &RingCtx, s: &str) -> RingElem {
        c.from_zpoly(&s.parse().unwrap())
    }

    #[test]
    fn addition_examples() {
        let c = ctx(2, "x^2+x+1");
        assert_eq!(el(&c, "2x+3").add(&el(&c, "3x+1")), el(&c, "x"));
        let a = el(&c, "3x+2");
        assert!(a.add(&a.neg()).is_zero());
        assert_eq!(a.add(&c.zero()), a);
        assert!(c.sum(std::iter::empty()).is_zero());
    }

    #[test]
    fn worked_products() {
        let c = ctx(2, "x^6+x^3+1");
        let v = el(&c, "x+1")
            .mul(&el(&c, "x^3+1"))
            .add(&el(&c, "x^2").mul(&el(&c, "x^5+x")))
            .add(&c.constant(3));
        assert_eq!(v.to_string(), "2x^3");
        let w = el(&c, "x^3+1")
            .add(&el(&c, "x").mul(&el(&c, "x^5+x")))
            .add(&el(&c, "x^2"));
        assert_eq!(w.to_string(), "2x^2");
        assert_eq!(v.project_mod2().to_string(), "0");
        assert_eq!(v.halve_even().unwrap().to_string(), "x^3");
    }

    #[test]
    fn mismatched_contexts_rejected() {
        let a = ctx(2, "x^2+x+1").one();
        let b = ctx(3, "x^2+x+1").one();
        assert_eq!(a.checked_add(&b), Err(RingError::ContextMismatch));
        let c = ctx(2, "x^6+x^3+1").one();
        assert_eq!(a.checked_mul(&c), Err(RingError::ContextMismatch));
    }

    #[test]
    fn inverse_examples() {
        let f4 = ctx(1, "x^2+x+1");
        assert_eq!(el(&f4, "x").field_inverse().unwrap(), el(&f4, "x+1"));
        assert!(f4.one().field_inverse().unwrap().is_one());
        assert_eq!(f4.zero().field_inverse(), Err(RingError::ZeroInverse));
        assert_eq!(ctx(2, "x^2+x+1").one().field_inverse(), Err(RingError::NotAField));
        let f64_ = ctx(1, "x^6+x^3+1");
        let e = el(&f64_, "x^2+x").field_inverse().unwrap();
        assert_eq!(e, el(&f64_, "x^4+x^3+x^2"));
        assert_eq!(el(&f64_, "x^5+x^4+x^2+x").mul(&e), el(&f64_, "x^3+1"));
    }

    #[test]
    fn inverse_every_element_small_fields() {
        for p in ["x^2+x+1", "x^3+x+1", "x^6+x^3+1", "x^18+x^9+1"] {
            let f = ctx(1, p);
            let d = f.degree();
            let count = if d <= 8 { 1u64 << d } else { 300 };
            for bits in 1..count {
                let a = f.from_gf(&GfPoly::from_u64(bits.wrapping_mul(0x9e37_79b9) & ((1 << d) - 1) | 1));
                assert!(a.mul(&a.field_inverse().unwrap()).is_one(), "{a:?}");
            }
        }
    }

    #[test]
    fn halve_and_lift() {
        let c3 = ctx(3, "x^2+x+1");
        let h = el(&c3, "2x+4").halve_even().unwrap();
        assert_eq!(h.ctx().k(), 2);
        assert_eq!(h.to_string(), "x+2");
        assert_eq!(el(&c3, "x+2").halve_even(), Err(RingError::NotEven));
        assert!(c3.zero().halve_even().unwrap().is_zero());
        let a = el(&c3, "7x+6");
        assert_eq!(a.project_mod2().to_string(), "x");
        assert_eq!(a.project_mod2().lift(3).project_mod2(), a.project_mod2());
        assert_eq!(h.double_lift(), el(&c3, "2x+4"));
    }

    #[test]
    fn large_modulus_products_match_schoolbook() {
        let c = RingCtx::trinomial(3, 400).unwrap();
        let d = c.degree();
        let a: Vec<u64> = (0..d as u64).map(|i| (i * 7 + 3) % 8).collect();
        let b: Vec<u64> = (0..d as u64).map(|i| (i * i + 1) % 8).collect();
        let fast = c.from_residues(&a).mul(&c.from_residues(&b));
        let mut slow = vec![0u64; 2 * d];
        for i in 0..d {
            for j in 0..d {
                slow[i + j] = slow[i + j].wrapping_add(a[i] * b[j]);
            }
        }
        assert_eq!(fast, c.from_residues(&slow));
    }

    #[test]
    fn batch_inverse_matches_single() {
        let f = ctx(1, "x^6+x^3+1");
        let items: Vec<RingElem> = (1..20u64).map(|i| f.from_gf(&GfPoly::from_u64(i))).collect();
        let inv = batch_inverse(&items).unwrap();
        for (a, b) in items.iter().zip(&inv) {
            assert_eq!(*b, a.field_inverse().unwrap());
        }
    }

    fn arb_elem(k: u32, p: &'static str) -> impl Strategy<Value = RingElem> {
        let c = ctx(k, p);
        let d = c.degree();
        proptest::collection::vec(0u64..(1 << k), d).prop_map(move |r| c.from_residues(&r))
    }

    fn triple() -> impl Strategy<Value = (RingElem, RingElem, RingElem)> {
        (1u32..=4, prop_oneof![Just("x^2+x+1"), Just("x^6+x^3+1")]).prop_flat_map(|(k, p)| {
            (arb_elem(k, p), arb_elem(k, p), arb_elem(k, p))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms((a, b, c) in triple()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&a.ctx().one()), a.clone());
        }

        #[test]
        fn projection_is_homomorphism((a, b, _c) in triple()) {
            prop_assert_eq!(a.mul(&b).project_mod2(), a.project_mod2().mul(&b.project_mod2()));
            prop_assert_eq!(a.add(&b).project_mod2(), a.project_mod2().add(&b.project_mod2()));
        }

        #[test]
        fn unit_power_vanishes((a, _b, _c) in triple()) {
            let k = a.ctx().k();
            let u = a.add(&a).add(&a.ctx().one());
            prop_assert!(u.pow(1 << (k - 1)).is_one());
        }
    }
}
