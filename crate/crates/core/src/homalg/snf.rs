//! Smith normal form over the integers.
//!
//! Unit pivots are eliminated sparsely first (Markowitz order), with the
//! transforms kept sparse; whatever is left goes through a dense routine.
//! [`snf`] tracks both transforms, [`snf_right`] only `V`, and
//! [`invariant_factors`] none.

use std::collections::BTreeMap;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use super::matrix::{BigMatrix, IntMatrix};
use crate::error::{Error, Result};

/// `U·A·V = S`; `U`, `V` unimodular, `S` diagonal with `s_i | s_{i+1}`, `s_i ≥ 0`.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub u: BigMatrix,
    pub u_inv: BigMatrix,
    pub v: BigMatrix,
    pub v_inv: BigMatrix,
    /// Nonzero diagonal entries of `S`.
    pub diag: Vec<i128>,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<i128> {
        self.diag.clone()
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// `S` itself, of the shape of the original matrix.
    pub fn s(&self) -> BigMatrix {
        BigMatrix::from_triplets(self.u.rows(), self.v.rows(), self.diag.iter().enumerate().map(|(i, &d)| (i, i, BigInt::from(d))))
    }
}

/// Full Smith normal form with both transforms.
pub fn snf(a: &IntMatrix) -> Result<SnfResult> {
    let (diag, u, v) = smith(a, true, true)?;
    let (u, u_inv) = u.expect("left transform tracked");
    let (v, v_inv) = v.expect("right transform tracked");
    Ok(SnfResult { u, u_inv, v, v_inv, diag })
}

/// Smith form tracking only the right transform: `(diagonal, V, V⁻¹)`.
pub fn snf_right(a: &IntMatrix) -> Result<(Vec<i128>, BigMatrix, BigMatrix)> {
    let (diag, _, v) = smith(a, false, true)?;
    let (v, v_inv) = v.expect("right transform tracked");
    Ok((diag, v, v_inv))
}

/// Nonzero invariant factors `s_1 | s_2 | …` of `a` (their count is the rank).
pub fn invariant_factors(a: &IntMatrix) -> Result<Vec<i128>> {
    smith(a, false, false).map(|r| r.0)
}

pub fn rank(a: &IntMatrix) -> Result<usize> {
    invariant_factors(a).map(|f| f.len())
}

/// Unit pivots are only taken while their row and column stay below this
/// size, which keeps the sparse phase free of overflow; the rest is left to
/// the big-integer dense phase.
const GROWTH_BOUND: i128 = 1 << 24;

type SparseVecs = Vec<BTreeMap<usize, i128>>;
type Pair = Option<(BigMatrix, BigMatrix)>;
type BigVecs = Vec<BTreeMap<usize, BigInt>>;

fn widen(v: SparseVecs) -> BigVecs {
    v.into_iter().map(|m| m.into_iter().map(|(c, x)| (c, BigInt::from(x))).collect()).collect()
}

fn unit_vectors(n: usize) -> SparseVecs {
    (0..n).map(|i| BTreeMap::from([(i, 1)])).collect()
}

/// `dst -= q·src` on sparse vectors.
fn axpy(dst: &mut BTreeMap<usize, i128>, src: &BTreeMap<usize, i128>, q: i128) -> Result<()> {
    for (&c, &v) in src {
        let e = dst.entry(c).or_insert(0);
        *e = v.checked_mul(q).and_then(|p| e.checked_sub(p)).ok_or(Error::Overflow)?;
        if *e == 0 {
            dst.remove(&c);
        }
    }
    Ok(())
}

/// Builds a matrix whose row `i` (or column `i` when `by_cols`) is `vecs[order[i]]`.
fn assemble(vecs: &BigVecs, order: &[usize], n: usize, by_cols: bool) -> BigMatrix {
    let t = order
        .iter()
        .enumerate()
        .flat_map(|(i, &o)| vecs[o].iter().map(move |(&c, v)| if by_cols { (c, i, v.clone()) } else { (i, c, v.clone()) }));
    if by_cols {
        BigMatrix::from_triplets(n, order.len(), t)
    } else {
        BigMatrix::from_triplets(order.len(), n, t)
    }
}

/// Combines sparse vectors: `out[a] = Σ_b m[a][b]·vecs[idx[b]]`, written back to `idx[a]`.
fn mix(vecs: &mut BigVecs, idx: &[usize], m: &Big, transpose: bool) {
    let old: BigVecs = idx.iter().map(|&i| std::mem::take(&mut vecs[i])).collect();
    for (a, &target) in idx.iter().enumerate() {
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (b, src) in old.iter().enumerate() {
            let q = if transpose { &m[b][a] } else { &m[a][b] };
            if !q.is_zero() {
                for (&c, x) in src {
                    *acc.entry(c).or_default() += q * x;
                }
            }
        }
        acc.retain(|_, x| !x.is_zero());
        vecs[target] = acc;
    }
}

/// Core routine. Returns the nonzero diagonal and, on request, `(U, U⁻¹)` and `(V, V⁻¹)`.
fn smith(a: &IntMatrix, left: bool, right: bool) -> Result<(Vec<i128>, Pair, Pair)> {
    let (m, n) = (a.rows(), a.cols());
    let mut rows: SparseVecs = (0..m).map(|i| a.row(i).iter().copied().collect()).collect();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, r) in rows.iter().enumerate() {
        for &c in r.keys() {
            col_rows[c].push(i);
        }
    }
    // U by rows, U⁻¹ by columns, V by columns, V⁻¹ by rows
    let (mut u, mut ui) = if left { (unit_vectors(m), unit_vectors(m)) } else { (Vec::new(), Vec::new()) };
    let (mut v, mut vi) = if right { (unit_vectors(n), unit_vectors(n)) } else { (Vec::new(), Vec::new()) };
    let mut row_alive = vec![true; m];
    let mut col_alive = vec![true; n];
    let mut pivots: Vec<(usize, usize)> = Vec::new();

    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, r) in rows.iter().enumerate() {
            if !row_alive[i] {
                continue;
            }
            if r.values().any(|x| x.abs() > GROWTH_BOUND) {
                continue;
            }
            for (&c, &x) in r {
                if x.abs() == 1 {
                    let cost = (r.len() - 1) * col_rows[c].len().saturating_sub(1);
                    if best.is_none_or(|b| cost < b.2)
                        && col_rows[c].iter().all(|&k| rows[k].get(&c).is_none_or(|y| y.abs() <= GROWTH_BOUND))
                    {
                        best = Some((i, c, cost));
                    }
                }
            }
            if best.is_some_and(|b| b.2 == 0) {
                break;
            }
        }
        let Some((pr, pc, _)) = best else { break };
        let pivot_row = std::mem::take(&mut rows[pr]);
        row_alive[pr] = false;
        col_alive[pc] = false;
        let pv = pivot_row[&pc];
        let others: Vec<usize> = col_rows[pc].iter().copied().filter(|&i| i != pr && row_alive[i]).collect();
        for i in others {
            let Some(&x) = rows[i].get(&pc) else { continue };
            let q = x * pv;
            for (&c, &y) in &pivot_row {
                let entry = rows[i].entry(c).or_insert(0);
                let was_zero = *entry == 0;
                *entry = y.checked_mul(q).and_then(|p| entry.checked_sub(p)).ok_or(Error::Overflow)?;
                if *entry == 0 {
                    rows[i].remove(&c);
                } else if was_zero {
                    col_rows[c].push(i);
                }
            }
            if left {
                // row i -= q row pr: U_i -= q U_pr, U⁻¹ column pr += q column i
                let src = u[pr].clone();
                axpy(&mut u[i], &src, q)?;
                let src = ui[i].clone();
                axpy(&mut ui[pr], &src, -q)?;
            }
        }
        if right {
            // col j -= (y·pv) col pc clears the pivot row: V_j -= q V_pc, V⁻¹ row pc += q row j
            for (&j, &y) in &pivot_row {
                if j == pc {
                    continue;
                }
                let q = y * pv;
                let src = v[pc].clone();
                axpy(&mut v[j], &src, q)?;
                let src = vi[j].clone();
                axpy(&mut vi[pc], &src, -q)?;
            }
        }
        if left && pv < 0 {
            for x in u[pr].values_mut() {
                *x = -*x;
            }
            for x in ui[pr].values_mut() {
                *x = -*x;
            }
        }
        for &c in pivot_row.keys() {
            col_rows[c].retain(|&i| row_alive[i] && rows[i].contains_key(&c));
        }
        pivots.push((pr, pc));
    }

    let (mut u, mut ui, mut v, mut vi) = (widen(u), widen(ui), widen(v), widen(vi));

    // dense fallback on the nonzero remainder
    let live_rows: Vec<usize> = (0..m).filter(|&i| row_alive[i] && !rows[i].is_empty()).collect();
    let mut live_cols: Vec<usize> = live_rows.iter().flat_map(|&i| rows[i].keys().copied()).collect();
    live_cols.sort_unstable();
    live_cols.dedup();
    let mut diag = vec![1i128; pivots.len()];
    if !live_rows.is_empty() {
        let col_index: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut d: Big = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
        for (r, &i) in live_rows.iter().enumerate() {
            for (&c, &x) in &rows[i] {
                d[r][col_index[&c]] = BigInt::from(x);
            }
        }
        let (tail, t) = snf_dense(d, live_cols.len(), left, right);
        for x in &tail {
            diag.push(to_i128(x)?);
        }
        if let Some((du, dui)) = t.u {
            // new U rows are du·(old rows); new U⁻¹ columns are (old columns)·dui
            mix(&mut u, &live_rows, &du, false);
            mix(&mut ui, &live_rows, &dui, true);
        }
        if let Some((dv, dvi)) = t.v {
            mix(&mut v, &live_cols, &dv, true);
            mix(&mut vi, &live_cols, &dvi, false);
        }
    }

    let order = |alive_first: Vec<usize>, live: &[usize], total: usize| -> Vec<usize> {
        let mut seen = vec![false; total];
        let mut out = Vec::with_capacity(total);
        for &i in alive_first.iter().chain(live) {
            seen[i] = true;
            out.push(i);
        }
        out.extend((0..total).filter(|&i| !seen[i]));
        out
    };
    let row_order = order(pivots.iter().map(|p| p.0).collect(), &live_rows, m);
    let col_order = order(pivots.iter().map(|p| p.1).collect(), &live_cols, n);
    let left_pair = left.then(|| (assemble(&u, &row_order, m, false), assemble(&ui, &row_order, m, true)));
    let right_pair = right.then(|| (assemble(&v, &col_order, n, true), assemble(&vi, &col_order, n, false)));
    Ok((diag, left_pair, right_pair))
}

type Big = Vec<Vec<BigInt>>;

fn big_identity(n: usize) -> Big {
    (0..n).map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect()).collect()
}

/// Dense transforms `(U, U⁻¹)` and `(V, V⁻¹)` kept in step with the matrix.
struct Transforms {
    u: Option<(Big, Big)>,
    v: Option<(Big, Big)>,
}

impl Transforms {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if let Some((u, ui)) = self.u.as_mut() {
            u.swap(a, b);
            for row in ui.iter_mut() {
                row.swap(a, b);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if let Some((v, vi)) = self.v.as_mut() {
            for row in v.iter_mut() {
                row.swap(a, b);
            }
            vi.swap(a, b);
        }
    }

    /// row[dst] += q row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if let Some((u, ui)) = self.u.as_mut() {
            add_row(u, dst, src, q);
            add_col(ui, src, dst, &-q);
        }
    }

    /// col[dst] += q col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if let Some((v, vi)) = self.v.as_mut() {
            add_col(v, dst, src, q);
            add_row(vi, src, dst, &-q);
        }
    }

    fn negate_row(&mut self, i: usize) {
        if let Some((u, ui)) = self.u.as_mut() {
            for x in u[i].iter_mut() {
                *x = -&*x;
            }
            for row in ui.iter_mut() {
                row[i] = -&row[i];
            }
        }
    }
}

fn add_row(a: &mut Big, dst: usize, src: usize, q: &BigInt) {
    if dst == src || q.is_zero() {
        return;
    }
    let src_row = a[src].clone();
    for (x, y) in a[dst].iter_mut().zip(&src_row) {
        if !y.is_zero() {
            *x += q * y;
        }
    }
}

fn add_col(a: &mut Big, dst: usize, src: usize, q: &BigInt) {
    if dst == src || q.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        if !row[src].is_zero() {
            let add = q * &row[src];
            row[dst] += add;
        }
    }
}

/// Dense Smith form over big integers: smallest pivot first, Euclidean
/// reduction of its row and column, then the divisibility fix-up.
fn snf_dense(mut a: Big, cols: usize, left: bool, right: bool) -> (Vec<BigInt>, Transforms) {
    let m = a.len();
    let n = cols;
    let mut tr = Transforms { u: left.then(|| (big_identity(m), big_identity(m))), v: right.then(|| (big_identity(n), big_identity(n))) };
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return (diag, tr);
            };
            a.swap(t, pi);
            tr.swap_rows(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            tr.swap_cols(t, pj);

            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = -nearest_quotient(&a[i][t], &p);
                    add_row(&mut a, i, t, &q);
                    tr.add_row(i, t, &q);
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = -nearest_quotient(&a[t][j], &p);
                    add_col(&mut a, j, t, &q);
                    tr.add_col(j, t, &q);
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..m).find(|&i| a[i][t + 1..].iter().any(|x| !x.mod_floor(&p).is_zero()));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    add_row(&mut a, t, i, &one);
                    tr.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            tr.negate_row(t);
        }
        diag.push(a[t][t].clone());
    }
    (diag, tr)
}

/// `x / p` rounded to the nearest integer, so remainders are at most `|p|/2`.
fn nearest_quotient(x: &BigInt, p: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (two.clone() * x + p.abs()).div_floor(&(two * p.abs())) * p.signum()
}

fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or(Error::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) {
        let r = snf(a).unwrap();
        assert_eq!(r.u.mul(&BigMatrix::from_int(a)).unwrap().mul(&r.v).unwrap(), r.s());
        assert_eq!(r.u.mul(&r.u_inv).unwrap(), BigMatrix::identity(a.rows()));
        assert_eq!(r.v.mul(&r.v_inv).unwrap(), BigMatrix::identity(a.cols()));
        for w in r.diag.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        assert!(r.diag.iter().all(|&d| d > 0));
        assert_eq!(invariant_factors(a).unwrap(), r.diag);
        let (d, v, vi) = snf_right(a).unwrap();
        assert_eq!(d, r.diag);
        assert_eq!(v.mul(&vi).unwrap(), BigMatrix::identity(a.cols()));
    }

    #[test]
    fn zero_matrix() {
        let a = IntMatrix::zeros(3, 2);
        let r = snf(&a).unwrap();
        assert_eq!(r.u, BigMatrix::identity(3));
        assert_eq!(r.v, BigMatrix::identity(2));
        assert!(r.diagonal().is_empty());
    }

    #[test]
    fn diag_2_3() {
        let a = IntMatrix::from_dense(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(snf(&a).unwrap().diagonal(), vec![1, 6]);
        check(&a);
    }

    #[test]
    fn classic_example() {
        let a = IntMatrix::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(snf(&a).unwrap().diagonal(), vec![2, 6, 12]);
        check(&a);
    }

    #[test]
    fn mixed_units_and_rest() {
        let a = IntMatrix::from_dense(&[
            vec![1, -1, 0, 0, 2],
            vec![0, 1, -1, 0, 0],
            vec![-1, 0, 1, 2, 0],
            vec![0, 0, 0, 4, 6],
            vec![0, 0, 0, 0, 0],
        ]);
        check(&a);
        check(&a.transpose());
    }

    #[test]
    fn empty_shapes() {
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(2, 0));
    }
}
