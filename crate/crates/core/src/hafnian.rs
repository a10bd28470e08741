//! Hafnians of symmetric integer matrices modulo `2^k`, and perfect
//! matching counts.

use rayon::prelude::*;

use crate::sdc::WeightedGraph;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HafnianError {
    #[error("odd dimension {0}")]
    OddDimension(usize),
    #[error("matrix not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("k must be in 1..=63, got {0}")]
    BadK(u32),
    #[error("expected {expected} entries, found {found}")]
    Shape { expected: usize, found: usize },
}

/// Symmetric integer matrix; the diagonal is ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMatZ {
    n: usize,
    a: Vec<i64>,
}

impl SymMatZ {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, HafnianError> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(HafnianError::Shape { expected: n, found: r.len() });
            }
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(HafnianError::NotSymmetric(i, j));
                }
            }
        }
        let mut a: Vec<i64> = rows.concat();
        for i in 0..n {
            a[i * n + i] = 0;
        }
        Ok(SymMatZ { n, a })
    }

    /// Upper triangle row by row, diagonal included.
    pub fn from_upper(n: usize, upper: &[i64]) -> Result<Self, HafnianError> {
        let expected = n * (n + 1) / 2;
        if upper.len() != expected {
            return Err(HafnianError::Shape { expected, found: upper.len() });
        }
        let mut a = vec![0i64; n * n];
        let mut it = upper.iter();
        for i in 0..n {
            for j in i..n {
                let v = *it.next().unwrap();
                if i != j {
                    a[i * n + j] = v;
                    a[j * n + i] = v;
                }
            }
        }
        Ok(SymMatZ { n, a })
    }

    pub fn adjacency(g: &WeightedGraph) -> SymMatZ {
        SymMatZ::from_rows(&g.adjacency()).expect("adjacency is symmetric")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        if i == j {
            0
        } else {
            self.a[i * self.n + j]
        }
    }

    /// `P A P^T` with row `i` of the result taken from row `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> SymMatZ {
        let n = self.n;
        let mut a = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = self.get(order[i], order[j]);
            }
        }
        SymMatZ { n, a }
    }

    fn residues(&self, k: u32) -> Vec<Vec<u64>> {
        let m = 1i128 << k;
        (0..self.n)
            .map(|i| (0..self.n).map(|j| (self.get(i, j) as i128).rem_euclid(m) as u64).collect())
            .collect()
    }
}

fn check(a: &SymMatZ, k: u32) -> Result<(), HafnianError> {
    if a.n % 2 == 1 {
        return Err(HafnianError::OddDimension(a.n));
    }
    if !(1..=63).contains(&k) {
        return Err(HafnianError::BadK(k));
    }
    Ok(())
}

/// hf(A) mod 2, which is det(A) mod 2.
pub fn hf_mod2(a: &SymMatZ) -> Result<u64, HafnianError> {
    hf_mod2k(a, 1)
}

pub fn hf_mod2k(a: &SymMatZ, k: u32) -> Result<u64, HafnianError> {
    check(a, k)?;
    Ok(hf(&a.residues(k), k))
}

/// Perfect matchings of `g` mod `2^k`.
pub fn count_matchings_mod2k(g: &WeightedGraph, k: u32) -> Result<u64, HafnianError> {
    if !(1..=63).contains(&k) {
        return Err(HafnianError::BadK(k));
    }
    if g.n() % 2 == 1 {
        return Ok(0);
    }
    hf_mod2k(&SymMatZ::adjacency(g), k)
}

type Mat = Vec<Vec<u64>>;

fn mask(k: u32) -> u64 {
    (1u64 << k) - 1
}

fn without(a: &Mat, drop: &[usize]) -> Mat {
    let keep: Vec<usize> = (0..a.len()).filter(|i| !drop.contains(i)).collect();
    keep.iter().map(|&i| keep.iter().map(|&j| a[i][j]).collect()).collect()
}

fn reduce(a: &Mat, k: u32) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x & mask(k)).collect()).collect()
}

fn bit_rows(a: &Mat) -> Vec<Vec<u64>> {
    let n = a.len();
    let words = n.div_ceil(64);
    a.iter()
        .map(|r| {
            let mut w = vec![0u64; words];
            for (j, x) in r.iter().enumerate() {
                if x & 1 == 1 {
                    w[j / 64] |= 1 << (j % 64);
                }
            }
            w
        })
        .collect()
}

fn bit(w: &[u64], j: usize) -> bool {
    (w[j / 64] >> (j % 64)) & 1 == 1
}

/// Non-zero `v` with `A v = 0` over GF(2), or `None` when `A` is invertible.
fn null_vector_bits(a: &Mat) -> Option<Vec<bool>> {
    let n = a.len();
    let mut rows = bit_rows(a);
    let mut pivot_of_col = vec![usize::MAX; n];
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..n).find(|&i| bit(&rows[i], c)) else {
            continue;
        };
        rows.swap(r, p);
        let pr = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && bit(row, c) {
                row.iter_mut().zip(&pr).for_each(|(x, y)| *x ^= y);
            }
        }
        pivot_of_col[c] = r;
        r += 1;
    }
    let free = (0..n).find(|&c| pivot_of_col[c] == usize::MAX)?;
    let mut v = vec![false; n];
    v[free] = true;
    for c in 0..n {
        let pr = pivot_of_col[c];
        if pr != usize::MAX && bit(&rows[pr], free) {
            v[c] = true;
        }
    }
    Some(v)
}

fn hf(a: &Mat, k: u32) -> u64 {
    let n = a.len();
    if n == 0 {
        return 1 & mask(k);
    }
    if n == 2 {
        return a[0][1] & mask(k);
    }
    match null_vector_bits(a) {
        Some(v) => hf_singular(a, &v, k),
        None if k == 1 => 1,
        None => {
            let j = (1..n)
                .find(|&j| a[0][j] & 1 == 1 && hf(&reduce(&without(a, &[0, j]), 1), 1) == 1)
                .expect("odd hafnian has an odd term");
            let mut c = a.clone();
            c[0][j] = (c[0][j] + 1) & mask(k);
            c[j][0] = c[0][j];
            let (hc, hm) = rayon::join(|| hf(&c, k), || hf(&without(a, &[0, j]), k));
            hc.wrapping_sub(hm) & mask(k)
        }
    }
}

fn hf_singular(a: &Mat, v: &[bool], k: u32) -> u64 {
    if k == 1 {
        return 0;
    }
    let n = a.len();
    let r = v.iter().position(|&b| b).expect("non-zero null vector");
    let mut order: Vec<usize> = (0..n).collect();
    order.swap(0, r);
    let a: Mat = order.iter().map(|&i| order.iter().map(|&j| a[i][j]).collect()).collect();
    let v: Vec<bool> = order.iter().map(|&i| v[i]).collect();
    let km = k - 1;
    let s1 = (1..n)
        .into_par_iter()
        .map(|j| {
            let col: u64 = (0..n)
                .filter(|&i| v[i] && i != j)
                .fold(0u64, |s, i| s.wrapping_add(a[i][j]));
            let b = (col >> 1) & mask(km);
            b.wrapping_mul(hf(&reduce(&without(&a, &[0, j]), km), km))
        })
        .reduce(|| 0, u64::wrapping_add);
    let s2 = (1..n)
        .into_par_iter()
        .filter(|&i| v[i])
        .map(|i| {
            let rest: Vec<usize> = (1..n).filter(|&x| x != i).collect();
            let mut s = 0u64;
            for (x, &p) in rest.iter().enumerate() {
                for &q in &rest[x + 1..] {
                    let w = a[i][p].wrapping_mul(a[i][q]) & mask(km);
                    if w != 0 {
                        let m = reduce(&without(&a, &[0, i, p, q]), km);
                        s = s.wrapping_add(w.wrapping_mul(hf(&m, km)));
                    }
                }
            }
            s
        })
        .reduce(|| 0, u64::wrapping_add);
    (s1.wrapping_sub(s2) & mask(km)) << 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::brute_hafnian;
    use proptest::prelude::*;

    fn k4() -> SymMatZ {
        SymMatZ::from_rows(&[
            vec![0, 1, 1, 1],
            vec![1, 0, 1, 1],
            vec![1, 1, 0, 1],
            vec![1, 1, 1, 0],
        ])
        .unwrap()
    }

    fn cycle(n: usize) -> WeightedGraph {
        WeightedGraph::new(n, (0..n).map(|i| (i, (i + 1) % n, 1)).collect()).unwrap()
    }

    pub(crate) fn petersen() -> WeightedGraph {
        let mut e: Vec<(usize, usize, u64)> = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5, 1));
            e.push((i, i + 5, 1));
            e.push((i + 5, (i + 2) % 5 + 5, 1));
        }
        WeightedGraph::new(10, e).unwrap()
    }

    #[test]
    fn small_examples() {
        let one = SymMatZ::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(hf_mod2(&one).unwrap(), 1);
        let two = SymMatZ::from_rows(&[vec![0, 2], vec![2, 0]]).unwrap();
        assert_eq!(hf_mod2(&two).unwrap(), 0);
        assert_eq!(hf_mod2(&k4()).unwrap(), 1);
        assert_eq!(hf_mod2k(&k4(), 2).unwrap(), 3);
        let neg = SymMatZ::from_rows(&[vec![0, -3], vec![-3, 0]]).unwrap();
        assert_eq!(hf_mod2k(&neg, 3).unwrap(), 5);
        let odd = SymMatZ::from_upper(3, &[0, 1, 1, 0, 1, 0]).unwrap();
        assert_eq!(hf_mod2k(&odd, 2), Err(HafnianError::OddDimension(3)));
        assert_eq!(hf_mod2k(&SymMatZ::from_rows(&[]).unwrap(), 3).unwrap(), 1);
        assert!(SymMatZ::from_rows(&[vec![0, 1], vec![2, 0]]).is_err());
    }

    #[test]
    fn matchings() {
        let path = WeightedGraph::new(4, vec![(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        assert_eq!(count_matchings_mod2k(&path, 3).unwrap(), 1);
        assert_eq!(count_matchings_mod2k(&cycle(6), 2).unwrap(), 2);
        assert_eq!(count_matchings_mod2k(&cycle(5), 2).unwrap(), 0);
        assert_eq!(count_matchings_mod2k(&petersen(), 4).unwrap(), 6);
    }

    fn sym(n: usize) -> impl Strategy<Value = SymMatZ> {
        proptest::collection::vec(-8i64..8, n * (n + 1) / 2)
            .prop_map(move |u| SymMatZ::from_upper(n, &u).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn matches_brute_force(a in (0usize..=4).prop_flat_map(|n| sym(2 * n)), k in 1u32..=4) {
            let want = brute_hafnian(&a).unwrap().rem_euclid(1i128 << k) as u64;
            prop_assert_eq!(hf_mod2k(&a, k).unwrap(), want);
        }

        #[test]
        fn permutation_invariant(a in sym(6), k in 1u32..=4, rot in 0usize..6) {
            let order: Vec<usize> = (0..6).map(|i| (i * 5 + rot) % 6).collect();
            prop_assert_eq!(hf_mod2k(&a.permuted(&order), k).unwrap(), hf_mod2k(&a, k).unwrap());
        }

        #[test]
        fn first_row_expansion(a in sym(6), k in 1u32..=4) {
            let mut total = 0u64;
            for j in 1..6 {
                let keep: Vec<usize> = (1..6).filter(|&x| x != j).collect();
                let minor = SymMatZ::from_rows(&keep.iter().map(|&p| keep.iter().map(|&q| a.get(p, q)).collect()).collect::<Vec<_>>()).unwrap();
                let c = (a.get(0, j) as i128).rem_euclid(1 << k) as u64;
                total = total.wrapping_add(c.wrapping_mul(hf_mod2k(&minor, k).unwrap()));
            }
            prop_assert_eq!(total & ((1 << k) - 1), hf_mod2k(&a, k).unwrap());
        }
    }
}
