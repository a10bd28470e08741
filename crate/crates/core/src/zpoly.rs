//! Dense polynomials in Z[x] with arbitrary-precision coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly_text::{self, ParseError};

/// Integer polynomial, constant term first, no trailing zero coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ZPoly::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        ZPoly::from_coeffs(vec![BigInt::from(c)])
    }

    pub fn monomial(c: i64, exp: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); exp + 1];
        coeffs[exp] = BigInt::from(c);
        ZPoly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        ZPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients reduced into `[0, 2^k)`.
    pub fn reduce_mod_pow2(&self, k: u32) -> ZPoly {
        let m = BigInt::one() << k;
        ZPoly::from_coeffs(
            self.coeffs
                .iter()
                .map(|c| ((c % &m) + &m) % &m)
                .collect(),
        )
    }

    /// Lowest exponent with a non-zero coefficient.
    pub fn lowest_exponent(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

impl Add for &ZPoly {
    type Output = ZPoly;
    fn add(self, rhs: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ZPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &ZPoly {
    type Output = ZPoly;
    fn sub(self, rhs: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ZPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &ZPoly {
    type Output = ZPoly;
    fn neg(self) -> ZPoly {
        ZPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &ZPoly {
    type Output = ZPoly;
    fn mul(self, rhs: &ZPoly) -> ZPoly {
        if self.is_zero() || rhs.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::from_coeffs(out)
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&poly_text::render(
            self.coeffs.iter().enumerate().rev().map(|(e, c)| (c, e)),
        ))
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZPoly({self})")
    }
}

impl FromStr for ZPoly {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        for (c, e) in poly_text::parse_terms(s)? {
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigInt::zero());
            }
            coeffs[e] += c;
        }
        Ok(ZPoly::from_coeffs(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn arithmetic_and_format() {
        let a: ZPoly = "x+1".parse().unwrap();
        let b: ZPoly = "x^2+1".parse().unwrap();
        assert_eq!((&a * &b).to_string(), "x^3+x^2+x+1");
        assert_eq!((&a - &a).to_string(), "0");
        assert_eq!((-&b).to_string(), "-x^2-1");
        let c: ZPoly = "2x^5+6x^4+2x^3+12x^2+12x".parse().unwrap();
        assert_eq!(c.reduce_mod_pow2(2).to_string(), "2x^5+2x^4+2x^3");
        assert_eq!("-3".parse::<ZPoly>().unwrap().reduce_mod_pow2(2), ZPoly::constant(1));
    }

    proptest! {
        #[test]
        fn display_round_trips(coeffs in proptest::collection::vec(-50i64..50, 0..8)) {
            let p = ZPoly::from_i64s(&coeffs);
            let back: ZPoly = p.to_string().parse().unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
