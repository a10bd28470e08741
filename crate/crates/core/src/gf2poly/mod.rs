//! Polynomials over GF(2), stored as packed bit vectors.
//!
//! Bit `i` of the limb sequence is the coefficient of `x^i`. Values are kept
//! canonical (no zero limbs above the degree), so structural equality is
//! polynomial equality.

mod clmul;

use std::fmt;
use std::str::FromStr;

use crate::poly_text::{self, ParseError};

pub(crate) use clmul::{degree_of, mul_words, shr_words, square_words, trim, truncate_bits, xor_shifted};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Gf2Error {
    #[error("zero modulus")]
    ZeroModulus,
    #[error("degree too small")]
    DegreeTooSmall,
}

/// A polynomial in GF(2)[x].
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct GfPoly {
    words: Vec<u64>,
}

impl GfPoly {
    pub fn zero() -> Self {
        GfPoly { words: Vec::new() }
    }

    pub fn one() -> Self {
        GfPoly { words: vec![1] }
    }

    pub fn x() -> Self {
        GfPoly { words: vec![2] }
    }

    pub fn monomial(exp: usize) -> Self {
        let mut words = vec![0u64; exp / 64 + 1];
        words[exp / 64] = 1u64 << (exp % 64);
        GfPoly { words }
    }

    /// Sum of `x^e` over the given exponents (repeats cancel).
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = GfPoly::zero();
        for &e in exps {
            p.flip(e);
        }
        p
    }

    /// Low 64 coefficients packed in a word.
    pub fn from_u64(bits: u64) -> Self {
        Self::from_words(vec![bits])
    }

    pub fn from_words(mut words: Vec<u64>) -> Self {
        trim(&mut words);
        GfPoly { words }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn into_words(self) -> Vec<u64> {
        self.words
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        degree_of(&self.words)
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    /// Toggles the coefficient of `x^i`.
    pub fn flip(&mut self, i: usize) {
        if self.words.len() <= i / 64 {
            self.words.resize(i / 64 + 1, 0);
        }
        self.words[i / 64] ^= 1u64 << (i % 64);
        trim(&mut self.words);
    }

    /// Exponents with a set coefficient, ascending.
    pub fn exponents(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    pub fn lowest_exponent(&self) -> Option<usize> {
        self.exponents().next()
    }

    pub fn add(&self, other: &GfPoly) -> GfPoly {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(&short.words) {
            *w ^= *s;
        }
        GfPoly::from_words(words)
    }

    pub fn mul(&self, other: &GfPoly) -> GfPoly {
        GfPoly::from_words(mul_words(&self.words, &other.words))
    }

    pub fn square(&self) -> GfPoly {
        GfPoly::from_words(square_words(&self.words))
    }

    pub fn shl(&self, shift: usize) -> GfPoly {
        let mut words = Vec::new();
        xor_shifted(&mut words, &self.words, shift);
        GfPoly::from_words(words)
    }

    /// Long division: `self = q * m + r` with `deg r < deg m`.
    pub fn div_rem(&self, m: &GfPoly) -> Result<(GfPoly, GfPoly), Gf2Error> {
        let dm = m.degree().ok_or(Gf2Error::ZeroModulus)?;
        let mut r = self.words.clone();
        let mut q = Vec::new();
        while let Some(dr) = degree_of(&r) {
            if dr < dm {
                break;
            }
            let s = dr - dm;
            xor_shifted(&mut r, &m.words, s);
            if q.len() <= s / 64 {
                q.resize(s / 64 + 1, 0);
            }
            q[s / 64] ^= 1u64 << (s % 64);
        }
        Ok((GfPoly::from_words(q), GfPoly::from_words(r)))
    }

    pub fn rem(&self, m: &GfPoly) -> Result<GfPoly, Gf2Error> {
        Ok(self.div_rem(m)?.1)
    }

    pub fn gcd(&self, other: &GfPoly) -> GfPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is non-zero");
            a = b;
            b = r;
        }
        a
    }

    /// `a * b mod m`.
    pub fn mul_mod(&self, b: &GfPoly, m: &GfPoly) -> Result<GfPoly, Gf2Error> {
        let modulus = Modulus::new(m.clone())?;
        Ok(modulus.mul(&modulus.reduce(self.clone()), &modulus.reduce(b.clone())))
    }

    /// Rabin's test: `x^(2^d) = x mod f` and `gcd(x^(2^(d/r)) - x, f) = 1`
    /// for every prime `r | d`.
    pub fn is_irreducible(&self) -> Result<bool, Gf2Error> {
        let d = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Gf2Error::DegreeTooSmall),
        };
        if !self.coeff(0) {
            // divisible by x
            return Ok(d == 1);
        }
        let modulus = Modulus::new(self.clone())?;
        let x = modulus.reduce(GfPoly::x());
        let primes = prime_factors(d);
        let mut checkpoints: Vec<usize> = primes.iter().map(|r| d / r).collect();
        checkpoints.sort_unstable();
        let mut power = x.clone();
        let mut next = 0;
        for i in 1..=d {
            power = modulus.square(&power);
            while next < checkpoints.len() && checkpoints[next] == i {
                let g = power.add(&x).gcd(self);
                if !g.is_one() {
                    return Ok(false);
                }
                next += 1;
            }
        }
        Ok(power == x)
    }

    /// `x^(2*3^l) + x^(3^l) + 1` for the smallest `l >= 0` with `2*3^l >= min_degree`.
    /// Every member of this family is irreducible over GF(2).
    pub fn select_trinomial(min_degree: usize) -> GfPoly {
        let mut half = 1usize;
        while 2 * half < min_degree {
            half *= 3;
        }
        GfPoly::from_exponents(&[2 * half, half, 0])
    }
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A fixed non-zero modulus with a precomputed term list, reducing by
/// folding the high part down: `x^d = sum of x^e` over the lower terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modulus {
    poly: GfPoly,
    degree: usize,
    low_terms: Vec<usize>,
}

impl Modulus {
    pub fn new(poly: GfPoly) -> Result<Self, Gf2Error> {
        let degree = poly.degree().ok_or(Gf2Error::ZeroModulus)?;
        let low_terms = poly.exponents().filter(|&e| e < degree).collect();
        Ok(Modulus {
            poly,
            degree,
            low_terms,
        })
    }

    pub fn poly(&self) -> &GfPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Exponents of the non-leading terms of the modulus.
    pub fn low_terms(&self) -> &[usize] {
        &self.low_terms
    }

    pub fn reduce(&self, a: GfPoly) -> GfPoly {
        GfPoly::from_words(self.reduce_words(a.words))
    }

    pub(crate) fn reduce_words(&self, mut w: Vec<u64>) -> Vec<u64> {
        let d = self.degree;
        if d == 0 {
            return Vec::new();
        }
        loop {
            match degree_of(&w) {
                Some(deg) if deg >= d => {}
                _ => break,
            }
            let high = shr_words(&w, d);
            truncate_bits(&mut w, d);
            for &e in &self.low_terms {
                xor_shifted(&mut w, &high, e);
            }
        }
        trim(&mut w);
        w
    }

    pub fn mul(&self, a: &GfPoly, b: &GfPoly) -> GfPoly {
        if a.is_zero() || b.is_zero() {
            return GfPoly::zero();
        }
        GfPoly::from_words(self.reduce_words(mul_words(&a.words, &b.words)))
    }

    pub fn square(&self, a: &GfPoly) -> GfPoly {
        GfPoly::from_words(self.reduce_words(square_words(&a.words)))
    }
}

impl fmt::Display for GfPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exps: Vec<usize> = self.exponents().collect();
        if exps.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = exps.iter().rev().map(|&e| poly_text::monomial(e)).collect();
        f.write_str(&terms.join("+"))
    }
}

impl fmt::Debug for GfPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GfPoly({self})")
    }
}

impl FromStr for GfPoly {
    type Err = ParseError;

    /// Accepts the integer-coefficient text format; coefficients are read mod 2.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = GfPoly::zero();
        for (c, e) in poly_text::parse_terms(s)? {
            if c.bit(0) {
                p.flip(e);
            }
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> GfPoly {
        s.parse().unwrap()
    }

    #[test]
    fn mul_mod_examples() {
        assert_eq!(p("x+1").mul_mod(&p("x+1"), &p("x^2+x+1")).unwrap(), p("x"));
        let m = p("x^6+x^3+1");
        assert_eq!(
            p("x^2+x").mul_mod(&p("x^3+1"), &m).unwrap(),
            p("x^5+x^4+x^2+x")
        );
        let a = p("x^9+x^4+1");
        assert_eq!(a.mul_mod(&GfPoly::one(), &m).unwrap(), a.rem(&m).unwrap());
        assert_eq!(a.mul_mod(&a, &GfPoly::zero()), Err(Gf2Error::ZeroModulus));
    }

    #[test]
    fn irreducibility_examples() {
        assert!(p("x^2+x+1").is_irreducible().unwrap());
        assert!(!p("x^2+1").is_irreducible().unwrap());
        assert!(p("x^6+x^3+1").is_irreducible().unwrap());
        assert!(p("x").is_irreducible().unwrap());
        assert!(!p("x^3+x").is_irreducible().unwrap());
        assert_eq!(p("1").is_irreducible(), Err(Gf2Error::DegreeTooSmall));
        assert_eq!(GfPoly::zero().is_irreducible(), Err(Gf2Error::DegreeTooSmall));
    }

    #[test]
    fn trinomial_selection() {
        assert_eq!(GfPoly::select_trinomial(5), p("x^6+x^3+1"));
        assert_eq!(GfPoly::select_trinomial(1), p("x^2+x+1"));
        assert_eq!(GfPoly::select_trinomial(2), p("x^2+x+1"));
        assert_eq!(GfPoly::select_trinomial(6), p("x^6+x^3+1"));
        assert_eq!(GfPoly::select_trinomial(7), p("x^18+x^9+1"));
        assert_eq!(GfPoly::select_trinomial(18), p("x^18+x^9+1"));
        assert_eq!(GfPoly::select_trinomial(19), p("x^54+x^27+1"));
    }

    #[test]
    fn trinomials_are_irreducible() {
        for d in 1..=54 {
            let t = GfPoly::select_trinomial(d);
            assert!(t.degree().unwrap() >= d);
            assert!(t.is_irreducible().unwrap(), "{t}");
        }
        // the larger members used by the graph solvers
        for d in [162, 486, 1458] {
            assert!(GfPoly::select_trinomial(d).is_irreducible().unwrap());
        }
    }

    #[test]
    fn display_format() {
        assert_eq!(p("x^6+x^3+1").to_string(), "x^6+x^3+1");
        assert_eq!(GfPoly::zero().to_string(), "0");
        assert_eq!(p("x").to_string(), "x");
        assert_eq!(p("3x^2+2x+1").to_string(), "x^2+1");
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p("x^20+x^13+x^7+x+1");
        let m = p("x^5+x^2+1");
        let (q, r) = a.div_rem(&m).unwrap();
        assert!(r.degree().unwrap_or(0) < 5);
        assert_eq!(q.mul(&m).add(&r), a);
    }
}
