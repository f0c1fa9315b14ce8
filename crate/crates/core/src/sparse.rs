//! Minimal compressed-sparse-row matrices for walk operators.

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseMatrix {
    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![Complex64::new(1.0, 0.0); n],
        }
    }

    /// Builds from unsorted `(row, col, value)` triplets, summing duplicates.
    /// Entries that are exactly zero are kept, so structural patterns survive.
    pub fn from_triplets(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, Complex64)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            debug_assert!(r < nrows && c < ncols);
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..nrows {
            row_ptr[r + 1] += row_ptr[r];
        }
        SparseMatrix { nrows, ncols, row_ptr, col_idx, values }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    /// Number of stored entries with nonzero value in row `r`.
    pub fn row_nonzeros(&self, r: usize) -> usize {
        self.row(r).filter(|(_, v)| *v != Complex64::new(0.0, 0.0)).count()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.row(r).find(|&(j, _)| j == c).map_or(Complex64::new(0.0, 0.0), |(_, v)| v)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.nrows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.nrows];
        self.mul_vec_into(x, &mut y);
        y
    }

    pub fn mul_vec_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *out = acc;
        }
    }

    /// `self · other`.
    pub fn matmul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows);
        let mut triplets = Vec::with_capacity(self.nnz() * 2);
        for r in 0..self.nrows {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    triplets.push((r, c, a * b));
                }
            }
        }
        SparseMatrix::from_triplets(self.nrows, other.ncols, triplets)
    }

    pub fn adjoint(&self) -> SparseMatrix {
        let triplets = self.triplets().map(|(r, c, v)| (c, r, v.conj())).collect();
        SparseMatrix::from_triplets(self.ncols, self.nrows, triplets)
    }

    /// Keeps only rows in `rows` and columns in `cols`, renumbered in the
    /// given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut col_map = vec![usize::MAX; self.ncols];
        for (new, &old) in cols.iter().enumerate() {
            col_map[old] = new;
        }
        let mut triplets = Vec::new();
        for (new_r, &old_r) in rows.iter().enumerate() {
            for (c, v) in self.row(old_r) {
                if col_map[c] != usize::MAX {
                    triplets.push((new_r, col_map[c], v));
                }
            }
        }
        SparseMatrix::from_triplets(rows.len(), cols.len(), triplets)
    }

    /// `max |(A*A − 1)_{ij}|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let p = self.adjoint().matmul(self);
        let mut dev: f64 = 0.0;
        for r in 0..p.nrows {
            let mut diag_seen = false;
            for (c, v) in p.row(r) {
                let target = if c == r {
                    diag_seen = true;
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                dev = dev.max((v - target).norm());
            }
            if !diag_seen {
                dev = dev.max(1.0);
            }
        }
        if self.nrows != self.ncols {
            dev = dev.max(1.0);
        }
        dev
    }

    pub fn to_dense(&self, cap: usize) -> Result<Mat<Complex64>> {
        let dim = self.nrows.max(self.ncols);
        if dim > cap {
            return Err(Error::DimensionCap { dim, cap });
        }
        let mut m = Mat::<Complex64>::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            m[(r, c)] += v;
        }
        Ok(m)
    }
}
