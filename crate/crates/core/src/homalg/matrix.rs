//! Sparse and dense exact integer matrices.

use num::traits::{CheckedAdd, CheckedMul};
use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};

/// Sparse integer matrix stored row-wise; each row is sorted by column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<(usize, i128)>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix { rows: n, cols: n, entries: (0..n).map(|i| vec![(i, 1)]).collect() }
    }

    /// Builds a matrix from `(row, col, value)` triplets; repeated positions add up.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, i128)>) -> Self {
        let mut entries: Vec<Vec<(usize, i128)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r},{c}) outside {rows}x{cols}");
            entries[r].push((c, v));
        }
        for row in entries.iter_mut() {
            row.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(usize, i128)> = Vec::with_capacity(row.len());
            for &(c, v) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            *row = merged;
        }
        IntMatrix { rows, cols, entries }
    }

    pub fn from_dense(rows: &[Vec<i128>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let triplets = rows.iter().enumerate().flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (i, j, v)));
        IntMatrix::from_triplets(rows.len(), cols, triplets)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, i128)] {
        &self.entries[i]
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.entries[i].binary_search_by_key(&j, |e| e.0).map_or(0, |pos| self.entries[i][pos].1)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i128)> + '_ {
        self.entries.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |&(j, v)| (i, j, v)))
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_triplets(self.cols, self.rows, self.triplets().map(|(i, j, v)| (j, i, v)))
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.triplets() {
            d.set(i, j, v);
        }
        d
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut triplets = Vec::new();
        for (i, row) in self.entries.iter().enumerate() {
            for &(k, a) in row {
                for &(j, b) in other.row(k) {
                    triplets.push((i, j, a.checked_mul(b).ok_or(Error::Overflow)?));
                }
            }
        }
        Ok(IntMatrix::from_triplets(self.rows, other.cols, triplets))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Vec::is_empty)
    }

    pub fn mul_vec_rat(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.cols, "vector length");
        self.entries.iter().map(|row| row.iter().map(|&(j, v)| x[j] * Rational::from_integer(v)).sum()).collect()
    }

    pub fn mul_vec_int(&self, x: &[i128]) -> Result<Vec<i128>> {
        assert_eq!(x.len(), self.cols, "vector length");
        self.entries
            .iter()
            .map(|row| {
                row.iter().try_fold(0i128, |acc, &(j, v)| v.checked_mul(x[j]).and_then(|p| acc.checked_add(p)).ok_or(Error::Overflow))
            })
            .collect()
    }

    /// `self^T x`.
    pub fn tmul_vec_rat(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.rows, "vector length");
        let mut out = vec![Rational::from_integer(0); self.cols];
        for (i, row) in self.entries.iter().enumerate() {
            if x[i] == Rational::from_integer(0) {
                continue;
            }
            for &(j, v) in row {
                out[j] += x[i] * Rational::from_integer(v);
            }
        }
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, entries }
    }

    /// Keeps only the listed columns, renumbered in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> IntMatrix {
        let mut new_index = vec![usize::MAX; self.cols];
        for (n, &c) in cols.iter().enumerate() {
            new_index[c] = n;
        }
        let triplets = self.triplets().filter(|&(_, j, _)| new_index[j] != usize::MAX).map(|(i, j, v)| (i, new_index[j], v));
        IntMatrix::from_triplets(self.rows, cols.len(), triplets)
    }
}

/// Row-major dense integer matrix used by the Smith normal form routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i128) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_sparse(&self) -> IntMatrix {
        let triplets = (0..self.rows).flat_map(|i| (0..self.cols).map(move |j| (i, j))).map(|(i, j)| (i, j, self.get(i, j)));
        IntMatrix::from_triplets(self.rows, self.cols, triplets)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += q * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, q: i128) -> Result<()> {
        if q == 0 {
            return Ok(());
        }
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j];
            if s != 0 {
                let d = &mut self.data[dst * self.cols + j];
                *d = s.checked_mul(q).and_then(|p| d.checked_add(p)).ok_or(Error::Overflow)?;
            }
        }
        Ok(())
    }

    /// `col[dst] += q * col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, q: i128) -> Result<()> {
        if q == 0 {
            return Ok(());
        }
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src];
            if s != 0 {
                let d = &mut self.data[i * self.cols + dst];
                *d = s.checked_mul(q).and_then(|p| d.checked_add(p)).ok_or(Error::Overflow)?;
            }
        }
        Ok(())
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self.data[i * self.cols + j] = -self.data[i * self.cols + j];
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self.data[i * self.cols + j] = -self.data[i * self.cols + j];
        }
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch("dense product".into()));
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let v = a.checked_mul(b).and_then(|p| out.get(i, j).checked_add(p)).ok_or(Error::Overflow)?;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec_int(&self, x: &[i128]) -> Result<Vec<i128>> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .try_fold(0i128, |acc, (&a, &b)| {
                        if a == 0 || b == 0 {
                            return Some(acc);
                        }
                        a.checked_mul(b).and_then(|p| acc.checked_add(p))
                    })
                    .ok_or(Error::Overflow)
            })
            .collect()
    }

    pub fn mul_vec_rat(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.cols);
        let zero = Rational::from_integer(0);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).filter(|(a, b)| **a != 0 && **b != zero).map(|(&a, b)| *b * Rational::from_integer(a)).sum())
            .collect()
    }

    /// `self^T x`.
    pub fn tmul_vec_rat(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.rows);
        let zero = Rational::from_integer(0);
        let mut out = vec![zero; self.cols];
        for (i, xi) in x.iter().enumerate() {
            if *xi == zero {
                continue;
            }
            for (j, &a) in self.row(i).iter().enumerate() {
                if a != 0 {
                    out[j] += *xi * Rational::from_integer(a);
                }
            }
        }
        out
    }

    /// Determinant by fraction-free elimination (Bareiss).
    pub fn determinant(&self) -> Result<i128> {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut m = self.clone();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if m.get(k, k) == 0 {
                match (k + 1..n).find(|&i| m.get(i, k) != 0) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = m
                        .get(i, j)
                        .checked_mul(m.get(k, k))
                        .and_then(|a| m.get(i, k).checked_mul(m.get(k, j)).and_then(|b| a.checked_sub(b)))
                        .ok_or(Error::Overflow)?;
                    m.set(i, j, v / prev);
                }
            }
            prev = m.get(k, k);
        }
        Ok(sign * m.get(n - 1, n - 1))
    }
}


/// Sparse matrix of big integers, used for Smith transforms whose entries
/// can outgrow `i128` even when the matrix itself is small.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<(usize, BigInt)>>,
}

impl BigMatrix {
    pub fn identity(n: usize) -> Self {
        BigMatrix { rows: n, cols: n, entries: (0..n).map(|i| vec![(i, BigInt::one())]).collect() }
    }

    /// Builds a matrix from triplets with distinct positions.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, BigInt)>) -> Self {
        let mut entries: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r},{c}) outside {rows}x{cols}");
            if !v.is_zero() {
                entries[r].push((c, v));
            }
        }
        for row in entries.iter_mut() {
            row.sort_unstable_by_key(|e| e.0);
        }
        BigMatrix { rows, cols, entries }
    }

    pub fn from_int(a: &IntMatrix) -> Self {
        BigMatrix::from_triplets(a.rows(), a.cols(), a.triplets().map(|(i, j, v)| (i, j, BigInt::from(v))))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, BigInt)] {
        &self.entries[i]
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.entries[i].binary_search_by_key(&j, |e| e.0).map_or_else(|_| BigInt::zero(), |pos| self.entries[i][pos].1.clone())
    }

    pub fn get_i128(&self, i: usize, j: usize) -> Result<i128> {
        self.get(i, j).to_i128().ok_or(Error::Overflow)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.entries.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn transpose(&self) -> BigMatrix {
        BigMatrix::from_triplets(self.cols, self.rows, self.triplets().map(|(i, j, v)| (j, i, v.clone())))
    }

    /// Column `j` as `i128` entries.
    pub fn col_i128(&self, j: usize) -> Result<Vec<i128>> {
        (0..self.rows).map(|i| self.get_i128(i, j)).collect()
    }

    /// The same matrix with `i128` entries, when they fit.
    pub fn to_int(&self) -> Result<IntMatrix> {
        let t = self.triplets().map(|(i, j, v)| v.to_i128().map(|v| (i, j, v)).ok_or(Error::Overflow)).collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix::from_triplets(self.rows, self.cols, t))
    }

    pub fn mul(&self, other: &BigMatrix) -> Result<BigMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Vec::with_capacity(self.rows);
        for row in &self.entries {
            let mut acc: std::collections::BTreeMap<usize, BigInt> = std::collections::BTreeMap::new();
            for (k, a) in row {
                for (j, b) in other.row(*k) {
                    *acc.entry(*j).or_default() += a * b;
                }
            }
            out.push(acc.into_iter().filter(|e| !e.1.is_zero()).collect());
        }
        Ok(BigMatrix { rows: self.rows, cols: other.cols, entries: out })
    }

    /// `self·x` computed exactly, with the result brought back to `Rational`.
    /// Rows are summed in `i128` and only redone with big integers on overflow.
    pub fn mul_vec_rat(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        assert_eq!(x.len(), self.cols, "vector length");
        self.entries
            .iter()
            .map(|row| {
                let fast = row.iter().try_fold(Rational::zero(), |acc, (j, v)| {
                    if x[*j].is_zero() {
                        return Some(acc);
                    }
                    let v = Rational::from_integer(v.to_i128()?);
                    acc.checked_add(&x[*j].checked_mul(&v)?)
                });
                if let Some(r) = fast {
                    return Ok(r);
                }
                let acc = big_dot(row, |j| BigRational::new(BigInt::from(*x[j].numer()), BigInt::from(*x[j].denom())), |j| x[j].is_zero());
                match (acc.numer().to_i128(), acc.denom().to_i128()) {
                    (Some(n), Some(d)) => Ok(Rational::new(n, d)),
                    _ => Err(Error::Overflow),
                }
            })
            .collect()
    }

    pub fn mul_vec_big(&self, x: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(x.len(), self.cols, "vector length");
        self.entries.iter().map(|row| big_dot(row, |j| x[j].clone(), |j| x[j].is_zero())).collect()
    }

    pub fn mul_vec_int(&self, x: &[i128]) -> Result<Vec<i128>> {
        assert_eq!(x.len(), self.cols, "vector length");
        self.entries
            .iter()
            .map(|row| {
                let acc: BigInt = row.iter().filter(|(j, _)| x[*j] != 0).map(|(j, v)| v * x[*j]).sum();
                acc.to_i128().ok_or(Error::Overflow)
            })
            .collect()
    }
}

fn big_dot(row: &[(usize, BigInt)], x: impl Fn(usize) -> BigRational, skip: impl Fn(usize) -> bool) -> BigRational {
    let mut acc = BigRational::zero();
    for (j, v) in row {
        if !skip(*j) {
            acc += x(*j) * v;
        }
    }
    acc
}
