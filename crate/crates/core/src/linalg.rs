//! Matrices over R_k and exact linear algebra over the field F = R_1.
//!
//! Elimination is fraction-free: a row update is `r <- p*r + e*pivot_row`
//! (characteristic 2), with per-row scale factors tracked so that true values
//! are recovered with a single batched inversion.

use crate::gf2poly::{GfPoly, Modulus};
use crate::ring::{batch_inverse, RingCtx, RingElem, RingError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix singular")]
    Singular,
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("expected a matrix over the field")]
    NotField,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Dense row-major matrix over a ring context.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    ctx: RingCtx,
    rows: usize,
    cols: usize,
    entries: Vec<RingElem>,
}

pub type MatF = Matrix;

impl Matrix {
    pub fn new(ctx: &RingCtx, rows: usize, cols: usize, entries: Vec<RingElem>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch);
        }
        if entries.iter().any(|e| e.ctx() != ctx) {
            return Err(RingError::ContextMismatch.into());
        }
        Ok(Matrix {
            ctx: ctx.clone(),
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(ctx: &RingCtx, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RingElem) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert!(e.ctx() == ctx, "context mismatch");
                entries.push(e);
            }
        }
        Matrix {
            ctx: ctx.clone(),
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(ctx: &RingCtx, rows: usize, cols: usize) -> Self {
        Self::from_fn(ctx, rows, cols, |_, _| ctx.zero())
    }

    pub fn identity(ctx: &RingCtx, n: usize) -> Self {
        Self::from_fn(ctx, n, n, |i, j| if i == j { ctx.one() } else { ctx.zero() })
    }

    pub fn ctx(&self) -> &RingCtx {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElem) {
        assert!(v.ctx() == &self.ctx, "context mismatch");
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[RingElem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch);
        }
        if self.ctx != other.ctx {
            return Err(RingError::ContextMismatch.into());
        }
        Ok(Matrix::from_fn(&self.ctx, self.rows, other.cols, |i, j| {
            let mut acc = self.ctx.zero();
            for t in 0..self.cols {
                acc.add_assign(&self.get(i, t).mul(other.get(t, j)));
            }
            acc
        }))
    }

    /// `A v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[RingElem]) -> Result<Vec<RingElem>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch);
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.ctx.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    acc.add_assign(&a.mul(b));
                }
                acc
            })
            .collect())
    }

    pub fn map(&self, ctx: &RingCtx, f: impl Fn(&RingElem) -> RingElem) -> Matrix {
        Matrix::from_fn(ctx, self.rows, self.cols, |i, j| f(self.get(i, j)))
    }

    pub fn project_mod2(&self) -> Matrix {
        self.map(&self.ctx.field(), |e| e.project_mod2())
    }

    pub fn reduce_to(&self, k: u32) -> Matrix {
        self.map(&self.ctx.with_k(k), |e| e.reduce_to(k))
    }

    /// Rows and columns kept in the given orders.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(&self.ctx, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Deletes the listed rows and columns.
    pub fn minor(&self, del_rows: &[usize], del_cols: &[usize]) -> Matrix {
        let r: Vec<usize> = (0..self.rows).filter(|i| !del_rows.contains(i)).collect();
        let c: Vec<usize> = (0..self.cols).filter(|j| !del_cols.contains(j)).collect();
        self.select(&r, &c)
    }

    /// Row `i` of the result is row `order[i]` of `self`.
    pub fn permute_rows(&self, order: &[usize]) -> Matrix {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(order, &cols)
    }

    /// Top-left `m x m` block.
    pub fn leading(&self, m: usize) -> Matrix {
        let idx: Vec<usize> = (0..m).collect();
        self.select(&idx, &idx)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn gf_rows(&self) -> Result<Vec<Vec<GfPoly>>, LinalgError> {
        if !self.ctx.is_field() {
            return Err(LinalgError::NotField);
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.to_gf()).collect())
            .collect())
    }
}

/// Result of a fraction-free Gauss elimination pass.
pub(crate) struct Elimination {
    pub rows: Vec<Vec<GfPoly>>,
    /// `(row, column)` of each pivot, in column order.
    pub pivots: Vec<(usize, usize)>,
    /// Product of the multipliers applied to each row.
    pub scale: Vec<GfPoly>,
    /// Scale of the pivot row at the moment it was chosen.
    pub pivot_scale: Vec<GfPoly>,
}

/// Eliminates column by column. The pivot in each column is the
/// lowest-indexed unused row with a non-zero entry. With `full`, entries
/// above the pivot are cleared as well (Gauss-Jordan).
pub(crate) fn eliminate(m: &Modulus, mut rows: Vec<Vec<GfPoly>>, full: bool) -> Elimination {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    let mut used = vec![false; nr];
    let mut scale = vec![GfPoly::one(); nr];
    let mut pivots = Vec::new();
    let mut pivot_scale = Vec::new();
    for c in 0..nc {
        let Some(p) = (0..nr).find(|&r| !used[r] && !rows[r][c].is_zero()) else {
            continue;
        };
        used[p] = true;
        pivots.push((p, c));
        pivot_scale.push(scale[p].clone());
        let piv = rows[p][c].clone();
        let prow = rows[p].clone();
        for r in 0..nr {
            if r == p || (used[r] && !full) {
                continue;
            }
            let e = rows[r][c].clone();
            if e.is_zero() {
                continue;
            }
            let row = &mut rows[r];
            for j in 0..nc {
                let a = if row[j].is_zero() { GfPoly::zero() } else { m.mul(&piv, &row[j]) };
                let b = if j == c {
                    // cancels exactly
                    a.clone()
                } else if prow[j].is_zero() {
                    GfPoly::zero()
                } else {
                    m.mul(&e, &prow[j])
                };
                row[j] = a.add(&b);
            }
            scale[r] = m.mul(&scale[r], &piv);
        }
    }
    Elimination {
        rows,
        pivots,
        scale,
        pivot_scale,
    }
}

/// `(num, den)` with `det = num / den`; `den` is never zero.
pub(crate) fn det_frac_rows(m: &Modulus, rows: Vec<Vec<GfPoly>>) -> (GfPoly, GfPoly) {
    let n = rows.len();
    if n == 0 {
        return (GfPoly::one(), GfPoly::one());
    }
    let el = eliminate(m, rows, false);
    if el.pivots.len() < n {
        return (GfPoly::zero(), GfPoly::one());
    }
    let mut num = GfPoly::one();
    let mut den = GfPoly::one();
    for (&(r, c), s) in el.pivots.iter().zip(&el.pivot_scale) {
        num = m.mul(&num, &el.rows[r][c]);
        den = m.mul(&den, s);
    }
    (num, den)
}

/// `sum over j<l of u_j u_l det(B without columns j, l)` for an
/// `(n-2) x n` matrix `B`, as `(num, den)`.
///
/// With `B` reduced to `[I | c1 c2]` on pivot columns and free columns f1, f2,
/// the sum is `det(B_piv) * ((u_f1 + a)(u_f2 + b) + sum u_p^2 c1_p c2_p)`,
/// `a = sum u_p c1_p`, `b = sum u_p c2_p`.
pub(crate) fn pair_minor_sum(m: &Modulus, rows: Vec<Vec<GfPoly>>, u: &[GfPoly]) -> (GfPoly, GfPoly) {
    let n = u.len();
    debug_assert_eq!(rows.len() + 2, n);
    if rows.is_empty() {
        // 0 x 2: the single pair, empty determinant
        return (m.mul(&u[0], &u[1]), GfPoly::one());
    }
    let el = eliminate(m, rows, true);
    if el.pivots.len() < n - 2 {
        return (GfPoly::zero(), GfPoly::one());
    }
    let pivot_cols: Vec<usize> = el.pivots.iter().map(|&(_, c)| c).collect();
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let (f1, f2) = (free[0], free[1]);
    let d: Vec<GfPoly> = el.pivots.iter().map(|&(r, c)| el.rows[r][c].clone()).collect();
    // prefix/suffix products give prod_{j != i} d_j without inversion
    let cnt = d.len();
    let mut pre = vec![GfPoly::one(); cnt + 1];
    for i in 0..cnt {
        pre[i + 1] = m.mul(&pre[i], &d[i]);
    }
    let mut suf = vec![GfPoly::one(); cnt + 1];
    for i in (0..cnt).rev() {
        suf[i] = m.mul(&suf[i + 1], &d[i]);
    }
    let delta = pre[cnt].clone();
    let mut alpha = m.mul(&u[f1], &delta);
    let mut beta = m.mul(&u[f2], &delta);
    let mut diag = GfPoly::zero();
    for (i, &(r, c)) in el.pivots.iter().enumerate() {
        let others = m.mul(&pre[i], &suf[i + 1]);
        let c1 = m.mul(&el.rows[r][f1], &others);
        let c2 = m.mul(&el.rows[r][f2], &others);
        if u[c].is_zero() {
            continue;
        }
        alpha = alpha.add(&m.mul(&u[c], &c1));
        beta = beta.add(&m.mul(&u[c], &c2));
        diag = diag.add(&m.mul(&m.square(&u[c]), &m.mul(&c1, &c2)));
    }
    let num = m.mul(&alpha, &beta).add(&diag);
    let mut den = delta;
    for &(r, _) in &el.pivots {
        den = m.mul(&den, &el.scale[r]);
    }
    (num, den)
}

/// Divides fractions with one batched inversion.
pub(crate) fn resolve_fracs(ctx: &RingCtx, fracs: &[(GfPoly, GfPoly)]) -> Result<Vec<RingElem>, RingError> {
    let field = ctx.field();
    let dens: Vec<RingElem> = fracs.iter().map(|(_, d)| field.from_gf(d)).collect();
    let inv = batch_inverse(&dens)?;
    Ok(fracs
        .iter()
        .zip(inv)
        .map(|((n, _), i)| field.from_gf(n).mul(&i))
        .collect())
}

fn require_square(a: &Matrix) -> Result<(), LinalgError> {
    if a.is_square() {
        Ok(())
    } else {
        Err(LinalgError::NotSquare(a.rows, a.cols))
    }
}

/// Determinant over F by elimination.
pub fn det_f(a: &MatF) -> Result<RingElem, LinalgError> {
    Ok(det_batch(std::slice::from_ref(a))?.remove(0))
}

/// Determinants of many matrices sharing one field, with a single inversion.
pub fn det_batch(mats: &[MatF]) -> Result<Vec<RingElem>, LinalgError> {
    let Some(first) = mats.first() else {
        return Ok(Vec::new());
    };
    let ctx = first.ctx.clone();
    let mut fracs = Vec::with_capacity(mats.len());
    for a in mats {
        require_square(a)?;
        if a.ctx != ctx {
            return Err(RingError::ContextMismatch.into());
        }
        fracs.push(det_frac_rows(ctx.modulus(), a.gf_rows()?));
    }
    Ok(resolve_fracs(&ctx, &fracs)?)
}

pub fn rank_f(a: &MatF) -> Result<usize, LinalgError> {
    let rows = a.gf_rows()?;
    if rows.is_empty() || a.cols == 0 {
        return Ok(0);
    }
    Ok(eliminate(a.ctx.modulus(), rows, false).pivots.len())
}

/// Non-trivial `v` with `A v = 0`, or `None` when `A` has full rank.
///
/// Pivot rows and columns of the elimination are the rank-increment sets;
/// the block `B` they select is invertible. Free coordinates are set to a
/// common scalar and the bound ones solve `B y = -C 1`, all scaled by
/// `det`-like factors so that no inversion is needed.
pub fn null_vector(a: &MatF) -> Result<Option<Vec<RingElem>>, LinalgError> {
    require_square(a)?;
    let field = a.ctx.clone();
    Ok(null_vector_gf(field.modulus(), a.gf_rows()?)
        .map(|v| v.iter().map(|g| field.from_gf(g)).collect()))
}

pub(crate) fn null_vector_gf(m: &Modulus, rows: Vec<Vec<GfPoly>>) -> Option<Vec<GfPoly>> {
    let n = rows.first().map_or(0, |r| r.len());
    if n == 0 {
        return None;
    }
    let el = eliminate(m, rows.clone(), false);
    let rank = el.pivots.len();
    if rank == n {
        return None;
    }
    let bound_rows: Vec<usize> = el.pivots.iter().map(|&(r, _)| r).collect();
    let bound_cols: Vec<usize> = el.pivots.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..n).filter(|c| !bound_cols.contains(c)).collect();
    // [B | C 1], B has non-zero leading minors in this order
    let aug: Vec<Vec<GfPoly>> = bound_rows
        .iter()
        .map(|&r| {
            let mut row: Vec<GfPoly> = bound_cols.iter().map(|&c| rows[r][c].clone()).collect();
            let mut rhs = GfPoly::zero();
            for &f in &free_cols {
                rhs = rhs.add(&rows[r][f]);
            }
            row.push(rhs);
            row
        })
        .collect();
    let gj = eliminate(m, aug, true);
    let d: Vec<GfPoly> = (0..rank).map(|i| gj.rows[i][i].clone()).collect();
    let mut pre = vec![GfPoly::one(); rank + 1];
    for i in 0..rank {
        pre[i + 1] = m.mul(&pre[i], &d[i]);
    }
    let mut suf = vec![GfPoly::one(); rank + 1];
    for i in (0..rank).rev() {
        suf[i] = m.mul(&suf[i + 1], &d[i]);
    }
    let mut v = vec![GfPoly::zero(); n];
    for &f in &free_cols {
        v[f] = pre[rank].clone();
    }
    for (i, &c) in bound_cols.iter().enumerate() {
        // d_i y_i = rhs_i, scaled by prod d
        v[c] = m.mul(&gj.rows[i][rank], &m.mul(&pre[i], &suf[i + 1]));
    }
    Some(v)
}

/// Null vector scaled so its first non-zero coordinate is 1, with the index
/// of that coordinate.
pub fn normalized_null_vector(a: &MatF) -> Result<Option<(usize, Vec<RingElem>)>, LinalgError> {
    let Some(v) = null_vector(a)? else {
        return Ok(None);
    };
    let first = v.iter().position(|e| !e.is_zero()).expect("non-trivial");
    let inv = v[first].field_inverse()?;
    Ok(Some((first, v.iter().map(|e| e.mul(&inv)).collect())))
}

/// Row order `s` such that `A` with row `i` taken from row `s[i]` has every
/// leading principal minor non-zero. `s_i` is the row added to the
/// rank-increment set when the first `i` columns are considered.
pub fn regularizing_permutation(a: &MatF) -> Result<Vec<usize>, LinalgError> {
    require_square(a)?;
    let el = eliminate(a.ctx.modulus(), a.gf_rows()?, false);
    if el.pivots.len() < a.rows {
        return Err(LinalgError::Singular);
    }
    Ok(el.pivots.iter().map(|&(r, _)| r).collect())
}

/// Pivots `L_m / L_(m-1)` of `A` (leading principal minors `L_m`), or
/// `Singular` if some leading minor vanishes.
pub fn leading_pivots(a: &MatF) -> Result<Vec<RingElem>, LinalgError> {
    require_square(a)?;
    let n = a.rows;
    let m = a.ctx.modulus();
    let mut rows = a.gf_rows()?;
    let mut scale = vec![GfPoly::one(); n];
    let mut fracs = Vec::with_capacity(n);
    for c in 0..n {
        if rows[c][c].is_zero() {
            return Err(LinalgError::Singular);
        }
        fracs.push((rows[c][c].clone(), scale[c].clone()));
        let piv = rows[c][c].clone();
        let prow = rows[c].clone();
        for r in c + 1..n {
            let e = rows[r][c].clone();
            if e.is_zero() {
                continue;
            }
            for j in c..n {
                let t = m.mul(&piv, &rows[r][j]).add(&m.mul(&e, &prow[j]));
                rows[r][j] = t;
            }
            scale[r] = m.mul(&scale[r], &piv);
        }
    }
    Ok(resolve_fracs(&a.ctx, &fracs)?)
}

pub fn inverse_f(a: &MatF) -> Result<MatF, LinalgError> {
    require_square(a)?;
    let n = a.rows;
    let m = a.ctx.modulus();
    let rows = a.gf_rows()?;
    let aug: Vec<Vec<GfPoly>> = rows
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            r.extend((0..n).map(|j| if i == j { GfPoly::one() } else { GfPoly::zero() }));
            r
        })
        .collect();
    let el = eliminate(m, aug, true);
    if el.pivots.iter().filter(|&&(_, c)| c < n).count() < n {
        return Err(LinalgError::Singular);
    }
    let field = a.ctx.clone();
    let piv: Vec<RingElem> = el.pivots[..n]
        .iter()
        .map(|&(r, c)| field.from_gf(&el.rows[r][c]))
        .collect();
    let inv = batch_inverse(&piv)?;
    let mut out = Matrix::zeros(&field, n, n);
    for (i, &(r, c)) in el.pivots[..n].iter().enumerate() {
        for j in 0..n {
            out.set(c, j, field.from_gf(&el.rows[r][n + j]).mul(&inv[i]));
        }
    }
    Ok(out)
}
