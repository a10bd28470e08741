//! Text format for univariate polynomials with integer coefficients:
//! descending exponents, terms joined by `+`/`-`, unit coefficients omitted,
//! e.g. `2x^5+2x^4-x+3`. The zero polynomial is written `0`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse polynomial {input:?}: {reason}")]
pub struct ParseError {
    pub input: String,
    pub reason: String,
}

fn err(input: &str, reason: impl Into<String>) -> ParseError {
    ParseError {
        input: input.to_string(),
        reason: reason.into(),
    }
}

pub(crate) fn monomial(exp: usize) -> String {
    match exp {
        0 => "1".to_string(),
        1 => "x".to_string(),
        e => format!("x^{e}"),
    }
}

/// Renders `(coefficient, exponent)` pairs, highest exponent first.
pub(crate) fn render<'a>(terms: impl Iterator<Item = (&'a BigInt, usize)>) -> String {
    let mut out = String::new();
    for (c, e) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let mag = c.abs();
        if e == 0 {
            out.push_str(&mag.to_string());
        } else {
            if !mag.is_one() {
                out.push_str(&mag.to_string());
            }
            out.push_str(&monomial(e));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Parses into `(coefficient, exponent)` pairs; repeated exponents are kept
/// separate and summed by the caller.
pub fn parse_terms(input: &str) -> Result<Vec<(BigInt, usize)>, ParseError> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err(input, "empty"));
    }
    let bytes = s.as_bytes();
    let mut terms = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let mut negative = false;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            negative = bytes[i] == b'-';
            i += 1;
        } else if i != 0 {
            return Err(err(input, format!("expected sign at offset {i}")));
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let digits = &s[start..i];
        let has_x = i < bytes.len() && bytes[i] == b'x';
        if digits.is_empty() && !has_x {
            return Err(err(input, format!("missing term at offset {start}")));
        }
        let mut coeff: BigInt = if digits.is_empty() {
            BigInt::one()
        } else {
            digits
                .parse()
                .map_err(|_| err(input, "bad coefficient"))?
        };
        let mut exp = 0usize;
        if has_x {
            i += 1;
            exp = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let es = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                exp = s[es..i]
                    .parse()
                    .map_err(|_| err(input, format!("bad exponent at offset {es}")))?;
            }
        }
        if negative {
            coeff = -coeff;
        }
        terms.push((coeff, exp));
    }
    Ok(terms)
}
