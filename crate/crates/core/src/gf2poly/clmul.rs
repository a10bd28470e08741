//! Word-level carry-less arithmetic on little-endian `u64` limb slices.
//!
//! Multiplication uses PCLMULQDQ when the CPU has it and a shift-xor
//! fallback otherwise. Results are identical on both paths.

/// Carry-less product of two 64-bit words as `(low, high)`.
#[inline]
pub fn clmul64_soft(a: u64, b: u64) -> (u64, u64) {
    let mut lo = 0u64;
    let mut hi = 0u64;
    let mut b = b;
    let mut i = 0;
    while b != 0 {
        if b & 1 == 1 {
            lo ^= a << i;
            if i > 0 {
                hi ^= a >> (64 - i);
            }
        }
        b >>= 1;
        i += 1;
    }
    (lo, hi)
}

fn mul_words_soft(a: &[u64], b: &[u64], out: &mut [u64]) {
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y == 0 {
                continue;
            }
            let (lo, hi) = clmul64_soft(x, y);
            out[i + j] ^= lo;
            out[i + j + 1] ^= hi;
        }
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq,sse2")]
unsafe fn mul_words_hw(a: &[u64], b: &[u64], out: &mut [u64]) {
    use std::arch::x86_64::*;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let xv = _mm_set_epi64x(0, x as i64);
        for (j, &y) in b.iter().enumerate() {
            let yv = _mm_set_epi64x(0, y as i64);
            let r = _mm_clmulepi64_si128(xv, yv, 0x00);
            let lo = _mm_cvtsi128_si64(r) as u64;
            let hi = _mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)) as u64;
            out[i + j] ^= lo;
            out[i + j + 1] ^= hi;
        }
    }
}

#[inline]
fn has_clmul() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        std::is_x86_feature_detected!("pclmulqdq")
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

const KARATSUBA_THRESHOLD: usize = 24;

fn mul_schoolbook(a: &[u64], b: &[u64], out: &mut [u64]) {
    #[cfg(target_arch = "x86_64")]
    {
        if has_clmul() {
            // SAFETY: the feature was detected at runtime.
            unsafe { mul_words_hw(a, b, out) };
            return;
        }
    }
    mul_words_soft(a, b, out)
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// `out ^= a * b`, with `out.len() >= a.len() + b.len()`.
fn mul_acc(a: &[u64], b: &[u64], out: &mut [u64]) {
    if a.len() < b.len() {
        return mul_acc(b, a, out);
    }
    if b.is_empty() {
        return;
    }
    if b.len() < KARATSUBA_THRESHOLD || a.len() != b.len() {
        if b.len() >= KARATSUBA_THRESHOLD {
            // Unbalanced: split the longer operand into chunks of b's length.
            let mut start = 0;
            while start < a.len() {
                let end = (start + b.len()).min(a.len());
                mul_acc(&a[start..end], b, &mut out[start..]);
                start = end;
            }
            return;
        }
        mul_schoolbook(a, b, out);
        return;
    }
    let n = a.len();
    let h = n / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let hi_len = n - h;

    let mut z0 = vec![0u64; 2 * h];
    mul_acc(a0, b0, &mut z0);
    let mut z2 = vec![0u64; 2 * hi_len];
    mul_acc(a1, b1, &mut z2);

    let mut sa = a1.to_vec();
    xor_into(&mut sa, a0);
    let mut sb = b1.to_vec();
    xor_into(&mut sb, b0);
    let mut z1 = vec![0u64; 2 * hi_len];
    mul_acc(&sa, &sb, &mut z1);
    xor_into(&mut z1, &z0);
    xor_into(&mut z1, &z2);

    xor_into(out, &z0);
    xor_into(&mut out[h..], &z1);
    xor_into(&mut out[2 * h..], &z2);
}

/// Full carry-less product; the result has `a.len() + b.len()` limbs.
pub fn mul_words(a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len()];
    mul_acc(a, b, &mut out);
    out
}

#[inline]
fn spread32(x: u64) -> u64 {
    // interleave the low 32 bits with zeros
    let mut x = x & 0xffff_ffff;
    x = (x | (x << 16)) & 0x0000_ffff_0000_ffff;
    x = (x | (x << 8)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

/// Square over GF(2): coefficient i moves to 2i.
pub fn square_words(a: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(2 * a.len());
    for &w in a {
        out.push(spread32(w));
        out.push(spread32(w >> 32));
    }
    out
}

/// `dst ^= src << shift` (bit shift), growing `dst` as needed.
pub fn xor_shifted(dst: &mut Vec<u64>, src: &[u64], shift: usize) {
    if src.is_empty() {
        return;
    }
    let ws = shift / 64;
    let bs = shift % 64;
    let need = ws + src.len() + usize::from(bs != 0);
    if dst.len() < need {
        dst.resize(need, 0);
    }
    if bs == 0 {
        for (i, &s) in src.iter().enumerate() {
            dst[ws + i] ^= s;
        }
    } else {
        for (i, &s) in src.iter().enumerate() {
            dst[ws + i] ^= s << bs;
            dst[ws + i + 1] ^= s >> (64 - bs);
        }
    }
}

/// Bits `shift..` of `src`, moved down to position 0.
pub fn shr_words(src: &[u64], shift: usize) -> Vec<u64> {
    let ws = shift / 64;
    let bs = shift % 64;
    if ws >= src.len() {
        return Vec::new();
    }
    let tail = &src[ws..];
    if bs == 0 {
        return tail.to_vec();
    }
    let mut out = Vec::with_capacity(tail.len());
    for i in 0..tail.len() {
        let hi = tail.get(i + 1).copied().unwrap_or(0);
        out.push((tail[i] >> bs) | (hi << (64 - bs)));
    }
    out
}

/// Clears every bit at position `>= bits`.
pub fn truncate_bits(words: &mut Vec<u64>, bits: usize) {
    let full = bits / 64;
    let rem = bits % 64;
    if words.len() > full {
        if rem == 0 {
            words.truncate(full);
        } else {
            words.truncate(full + 1);
            words[full] &= (1u64 << rem) - 1;
        }
    }
}

pub fn trim(words: &mut Vec<u64>) {
    while words.last() == Some(&0) {
        words.pop();
    }
}

pub fn degree_of(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .rposition(|&w| w != 0)
        .map(|i| i * 64 + 63 - words[i].leading_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; a.len() + b.len()];
        mul_words_soft(a, b, &mut out);
        out
    }

    #[test]
    fn soft_matches_known_product() {
        // (x+1)^2 = x^2+1
        assert_eq!(clmul64_soft(3, 3), (5, 0));
        assert_eq!(clmul64_soft(1 << 63, 2), (0, 1));
    }

    #[test]
    fn karatsuba_agrees_with_schoolbook() {
        let mut s = 0x9e37_79b9_7f4a_7c15u64;
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            s
        };
        for &(la, lb) in &[(30usize, 30usize), (57, 57), (70, 31), (100, 25), (3, 90)] {
            let a: Vec<u64> = (0..la).map(|_| next()).collect();
            let b: Vec<u64> = (0..lb).map(|_| next()).collect();
            assert_eq!(mul_words(&a, &b), naive(&a, &b), "{la}x{lb}");
        }
    }

    #[test]
    fn square_is_self_product() {
        let a = vec![0xdead_beef_0123_4567u64, 0x8000_0000_0000_0001];
        assert_eq!(square_words(&a), naive(&a, &a));
    }
}
