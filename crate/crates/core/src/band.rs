//! Sparse real matrices with compressed-column storage.
//!
//! Refinement masks and assembled multiscale transforms are all stored as
//! [`BandMatrix`]. The type is deliberately small: construction from
//! triplets, products with vectors and other sparse matrices, Kronecker
//! products and the handful of entry-wise reductions the norm checks need.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct BandMatrix {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl BandMatrix {
    /// Builds a matrix from `(row, col, value)` triplets.
    ///
    /// Out-of-range positions and duplicated positions are rejected.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        mut triplets: Vec<(usize, usize, f64)>,
    ) -> Result<Self> {
        for &(r, c, _) in &triplets {
            if r >= rows || c >= cols {
                return Err(Error::InvalidIndex(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
        }
        triplets.sort_by_key(|t| (t.1, t.0));
        for w in triplets.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(Error::InvalidIndex(format!(
                    "duplicate entry at ({}, {})",
                    w[0].0, w[0].1
                )));
            }
        }
        Ok(Self::from_sorted_unchecked(rows, cols, &triplets))
    }

    fn from_sorted_unchecked(rows: usize, cols: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut col_ptr = vec![0usize; cols + 1];
        for &(_, c, _) in triplets {
            col_ptr[c + 1] += 1;
        }
        for c in 0..cols {
            col_ptr[c + 1] += col_ptr[c];
        }
        Self {
            rows,
            cols,
            col_ptr,
            row_idx: triplets.iter().map(|t| t.0).collect(),
            values: triplets.iter().map(|t| t.2).collect(),
        }
    }

    fn from_columns(rows: usize, columns: Vec<Vec<(usize, f64)>>) -> Self {
        let cols = columns.len();
        let mut col_ptr = Vec::with_capacity(cols + 1);
        col_ptr.push(0);
        let mut row_idx = Vec::new();
        let mut values = Vec::new();
        for mut col in columns {
            col.sort_by_key(|e| e.0);
            for (r, v) in col {
                row_idx.push(r);
                values.push(v);
            }
            col_ptr.push(row_idx.len());
        }
        Self {
            rows,
            cols,
            col_ptr,
            row_idx,
            values,
        }
    }

    /// `self + s * rhs`.
    pub fn add_scaled(&self, rhs: &BandMatrix, s: f64) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::dims("matrix sum", self.rows * self.cols, rhs.rows * rhs.cols));
        }
        let columns = (0..self.cols)
            .map(|c| {
                let mut col: Vec<(usize, f64)> = self.column(c).collect();
                col.extend(rhs.column(c).map(|(r, v)| (r, s * v)));
                col.sort_by_key(|e| e.0);
                let mut merged: Vec<(usize, f64)> = Vec::with_capacity(col.len());
                for (r, v) in col {
                    match merged.last_mut() {
                        Some(last) if last.0 == r => last.1 += v,
                        _ => merged.push((r, v)),
                    }
                }
                merged
            })
            .collect();
        Ok(Self::from_columns(self.rows, columns))
    }

    /// Drops entries with modulus below `tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        let columns = (0..self.cols)
            .map(|c| self.column(c).filter(|e| e.1.abs() >= tol).collect())
            .collect();
        Self::from_columns(self.rows, columns)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            col_ptr: (0..=n).collect(),
            row_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn from_dense(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dims("dense matrix data", rows * cols, data.len()));
        }
        let mut columns = vec![Vec::new(); cols];
        for r in 0..rows {
            for (c, column) in columns.iter_mut().enumerate() {
                let v = data[r * cols + c];
                if v != 0.0 {
                    column.push((r, v));
                }
            }
        }
        Ok(Self::from_columns(rows, columns))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Entries of column `c` as `(row, value)` pairs in increasing row order.
    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.col_ptr[c]..self.col_ptr[c + 1];
        self.row_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    /// All stored entries in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.cols).flat_map(move |c| self.column(c).map(move |(r, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let range = self.col_ptr[c]..self.col_ptr[c + 1];
        match self.row_idx[range.clone()].binary_search(&r) {
            Ok(i) => self.values[range.start + i],
            Err(_) => 0.0,
        }
    }

    /// Returns a copy with `delta` added to entry `(r, c)`, inserting it if absent.
    pub fn with_added(&self, r: usize, c: usize, delta: f64) -> Result<Self> {
        let mut t: Vec<_> = self.triplets().collect();
        match t.iter_mut().find(|e| e.0 == r && e.1 == c) {
            Some(e) => e.2 += delta,
            None => t.push((r, c, delta)),
        }
        Self::from_triplets(self.rows, self.cols, t)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::dims("matrix-vector product", self.cols, x.len()));
        }
        let mut y = vec![0.0; self.rows];
        for (c, &xc) in x.iter().enumerate() {
            if xc == 0.0 {
                continue;
            }
            for (r, v) in self.column(c) {
                y[r] += v * xc;
            }
        }
        Ok(y)
    }

    /// Computes `self^T x`.
    pub fn tr_mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.rows {
            return Err(Error::dims("transposed matrix-vector product", self.rows, x.len()));
        }
        Ok((0..self.cols)
            .map(|c| self.column(c).map(|(r, v)| v * x[r]).sum())
            .collect())
    }

    /// `y += self * x` without allocation; slice lengths must match.
    pub(crate) fn mul_acc(&self, x: &[f64], y: &mut [f64]) {
        debug_assert!(x.len() == self.cols && y.len() == self.rows);
        for (c, &xc) in x.iter().enumerate() {
            if xc == 0.0 {
                continue;
            }
            for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                y[self.row_idx[k]] += self.values[k] * xc;
            }
        }
    }

    /// `y = self^T x` without allocation.
    pub(crate) fn tr_mul_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert!(x.len() == self.rows && y.len() == self.cols);
        for (c, yc) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                s += self.values[k] * x[self.row_idx[k]];
            }
            *yc = s;
        }
    }

    pub fn transpose(&self) -> Self {
        let mut columns = vec![Vec::new(); self.rows];
        for (r, c, v) in self.triplets() {
            columns[r].push((c, v));
        }
        Self::from_columns(self.cols, columns)
    }

    /// Sparse product `self * rhs`; exact zeros produced by cancellation are dropped.
    pub fn matmul(&self, rhs: &BandMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::dims("matrix product", self.cols, rhs.rows));
        }
        let mut acc = vec![0.0; self.rows];
        let mut touched = vec![false; self.rows];
        let mut columns = Vec::with_capacity(rhs.cols);
        for c in 0..rhs.cols {
            let mut pattern = Vec::new();
            for (k, b) in rhs.column(c) {
                for (r, a) in self.column(k) {
                    if !touched[r] {
                        touched[r] = true;
                        pattern.push(r);
                    }
                    acc[r] += a * b;
                }
            }
            let mut col = Vec::with_capacity(pattern.len());
            for r in pattern {
                if acc[r] != 0.0 {
                    col.push((r, acc[r]));
                }
                acc[r] = 0.0;
                touched[r] = false;
            }
            columns.push(col);
        }
        Ok(Self::from_columns(self.rows, columns))
    }

    /// Explicit Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &BandMatrix) -> Self {
        let rows = self.rows * rhs.rows;
        let mut columns = Vec::with_capacity(self.cols * rhs.cols);
        for ca in 0..self.cols {
            for cb in 0..rhs.cols {
                let mut col = Vec::new();
                for (ra, a) in self.column(ca) {
                    for (rb, b) in rhs.column(cb) {
                        col.push((ra * rhs.rows + rb, a * b));
                    }
                }
                columns.push(col);
            }
        }
        Self::from_columns(rows, columns)
    }

    /// Horizontal concatenation `[self, rhs]`.
    pub fn hstack(&self, rhs: &BandMatrix) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(Error::dims("horizontal concatenation", self.rows, rhs.rows));
        }
        let columns = (0..self.cols)
            .map(|c| self.column(c).collect())
            .chain((0..rhs.cols).map(|c| rhs.column(c).collect()))
            .collect();
        Ok(Self::from_columns(self.rows, columns))
    }

    /// `blockdiag(self, I)` of total size `n x n`; `self` must be square.
    pub fn pad_identity(&self, n: usize) -> Result<Self> {
        if self.rows != self.cols || self.rows > n {
            return Err(Error::dims("identity padding", n, self.rows));
        }
        let columns = (0..n)
            .map(|c| {
                if c < self.cols {
                    self.column(c).collect()
                } else {
                    vec![(c, 1.0)]
                }
            })
            .collect();
        Ok(Self::from_columns(n, columns))
    }

    /// Largest distance between first and last nonzero row over all columns.
    pub fn column_span(&self) -> usize {
        (0..self.cols)
            .filter_map(|c| {
                let range = self.col_ptr[c]..self.col_ptr[c + 1];
                let rows = &self.row_idx[range];
                Some(rows.last()? - rows.first()? + 1)
            })
            .max()
            .unwrap_or(0)
    }

    /// `max |self - I|` over all positions; `self` must be square.
    pub fn identity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for c in 0..self.cols {
            let mut diag_seen = false;
            for (r, v) in self.column(c) {
                let target = if r == c {
                    diag_seen = true;
                    1.0
                } else {
                    0.0
                };
                worst = worst.max((v - target).abs());
            }
            if !diag_seen && c < self.rows {
                worst = worst.max(1.0);
            }
        }
        worst
    }

    /// `max_j sum_i |a_ij|^p` — the entry-wise p-th power column sum.
    pub fn max_column_power_sum(&self, p: f64) -> f64 {
        (0..self.cols)
            .map(|c| self.column(c).map(|(_, v)| v.abs().powf(p)).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_column_abs_sum(&self) -> f64 {
        (0..self.cols)
            .map(|c| self.column(c).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_row_abs_sum(&self) -> f64 {
        let mut sums = vec![0.0; self.rows];
        for (r, _, v) in self.triplets() {
            sums[r] += v.abs();
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    /// Writes the matrix as one triple-format block (`level rows cols`, then `row col value`).
    pub fn write_block(&self, level: u32, out: &mut impl std::fmt::Write) -> std::fmt::Result {
        writeln!(out, "{level} {} {}", self.rows, self.cols)?;
        for (r, c, v) in self.triplets() {
            writeln!(out, "{r} {c} {v:.16e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, d: &[f64]) -> BandMatrix {
        BandMatrix::from_dense(rows, cols, d).unwrap()
    }

    #[test]
    fn duplicate_and_out_of_range_rejected() {
        assert!(BandMatrix::from_triplets(2, 2, vec![(0, 0, 1.0), (0, 0, 2.0)]).is_err());
        assert!(BandMatrix::from_triplets(2, 2, vec![(2, 0, 1.0)]).is_err());
    }

    #[test]
    fn products_match_dense() {
        let a = m(2, 3, &[1.0, 2.0, 0.0, 0.0, -1.0, 3.0]);
        let b = m(3, 2, &[1.0, 0.0, 0.5, 2.0, 0.0, -4.0]);
        let ab = a.matmul(&b).unwrap().to_dense();
        assert_eq!(ab, a.to_dense() * b.to_dense());
        assert_eq!(a.mul_vec(&[1.0, 1.0, 1.0]).unwrap(), vec![3.0, 2.0]);
        assert_eq!(a.tr_mul_vec(&[1.0, 1.0]).unwrap(), vec![1.0, 1.0, 3.0]);
        assert_eq!(a.transpose().to_dense(), a.to_dense().transpose());
    }

    #[test]
    fn kron_matches_dense() {
        let a = m(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = m(2, 1, &[0.0, 5.0]);
        assert_eq!(a.kron(&b).to_dense(), a.to_dense().kronecker(&b.to_dense()));
    }

    #[test]
    fn norms_and_defects() {
        let a = m(2, 2, &[1.0, -2.0, 3.0, 0.5]);
        assert_eq!(a.max_column_abs_sum(), 4.0);
        assert_eq!(a.max_row_abs_sum(), 3.5);
        assert_eq!(BandMatrix::identity(3).identity_defect(), 0.0);
        assert_eq!(m(2, 2, &[1.0, 0.0, 0.0, 0.0]).identity_defect(), 1.0);
        assert_eq!(a.column_span(), 2);
    }

    #[test]
    fn padding_and_stacking() {
        let a = m(1, 1, &[2.0]);
        let p = a.pad_identity(3).unwrap();
        assert_eq!(p.get(0, 0), 2.0);
        assert_eq!(p.get(2, 2), 1.0);
        let h = a.hstack(&m(1, 2, &[3.0, 4.0])).unwrap();
        assert_eq!(h.to_dense(), nalgebra::DMatrix::from_row_slice(1, 3, &[2.0, 3.0, 4.0]));
    }
}
