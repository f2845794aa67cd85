//! Dense matrices over a prime field.
//!
//! Entries are stored row-major. Every operation that does arithmetic takes
//! the [`Field`] explicitly; a `Matrix` carries no modulus of its own.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, 1)
    }

    /// `value` times the `n × n` identity.
    pub fn scalar(n: usize, value: u32) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = value;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.concat() })
    }

    /// Column vector.
    pub fn column(values: &[u32]) -> Self {
        Matrix { rows: values.len(), cols: 1, data: values.to_vec() }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u32> {
        self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// True when every entry is a valid element of `field`.
    pub fn is_reduced(&self, field: &Field) -> bool {
        self.data.iter().all(|&v| field.contains(v))
    }

    pub fn neg(&self, field: &Field) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| field.neg(v)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Matrix, field: &Field) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let q = field.modulus() as u64;
        let mut out = vec![0u64; self.rows * rhs.cols];
        for i in 0..self.rows {
            let acc = &mut out[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let a = a as u64;
                for (o, &b) in acc.iter_mut().zip(rhs.row(k)) {
                    *o = (*o + a * b as u64) % q;
                }
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: rhs.cols,
            data: out.into_iter().map(|v| v as u32).collect(),
        })
    }

    /// `self · v` for a plain slice.
    pub fn mul_vec(&self, v: &[u32], field: &Field) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let q = field.modulus() as u64;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % q) as u32
            })
            .collect())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Matrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for r in 0..self.rows {
            let row = self.row(r);
            data.extend(idx.iter().map(|&c| row[c]));
        }
        Matrix { rows: self.rows, cols: idx.len(), data }
    }

    /// Copy of the `h × w` sub-matrix whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Matrix {
        let mut data = Vec::with_capacity(h * w);
        for r in r0..r0 + h {
            data.extend_from_slice(&self.row(r)[c0..c0 + w]);
        }
        Matrix { rows: h, cols: w, data }
    }

    /// Overwrites the region starting at `(r0, c0)` with `src`.
    pub fn set_block(&mut self, r0: usize, c0: usize, src: &Matrix) {
        assert!(r0 + src.rows <= self.rows && c0 + src.cols <= self.cols);
        for r in 0..src.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + src.cols].copy_from_slice(src.row(r));
        }
    }

    /// Stacks a grid of equally shaped blocks into one matrix.
    pub fn from_blocks(grid: &[Vec<&Matrix>]) -> Result<Matrix> {
        let Some(first) = grid.first().and_then(|r| r.first()) else {
            return Ok(Matrix::zeros(0, 0));
        };
        let (h, w) = (first.rows, first.cols);
        let width = grid[0].len();
        let mut out = Matrix::zeros(grid.len() * h, width * w);
        for (bi, row) in grid.iter().enumerate() {
            if row.len() != width {
                return Err(Error::Dimension("ragged block grid".into()));
            }
            for (bj, b) in row.iter().enumerate() {
                if b.rows != h || b.cols != w {
                    return Err(Error::Dimension("unequal block shapes".into()));
                }
                out.set_block(bi * h, bj * w, b);
            }
        }
        Ok(out)
    }

    /// Rank over `field` by row reduction.
    pub fn rank(&self, field: &Field) -> usize {
        let mut work = self.clone();
        work.row_reduce(self.cols, field)
    }

    /// Solves `self · x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &Matrix, field: &Field) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "solve needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        if b.rows != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side has {} rows, expected {}",
                b.rows, self.rows
            )));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, n + b.cols);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, b);
        if aug.row_reduce(n, field) < n {
            return Err(Error::Singular);
        }
        Ok(aug.block(0, n, n, b.cols))
    }

    pub fn inverse(&self, field: &Field) -> Result<Matrix> {
        self.solve(&Matrix::identity(self.rows), field)
    }

    /// Gauss-Jordan elimination on the first `pivot_cols` columns, in place.
    /// Pivots are normalized to 1 and cleared above and below. Returns the
    /// number of pivots found; on full rank the left block becomes identity.
    fn row_reduce(&mut self, pivot_cols: usize, field: &Field) -> usize {
        let q = field.modulus() as u64;
        let cols = self.cols;
        let mut rank = 0;
        for c in 0..pivot_cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| self.data[r * cols + c] != 0) else {
                continue;
            };
            if p != rank {
                for k in 0..cols {
                    self.data.swap(p * cols + k, rank * cols + k);
                }
            }
            let inv = field
                .inv(self.data[rank * cols + c])
                .expect("pivot is nonzero") as u64;
            for k in c..cols {
                let v = &mut self.data[rank * cols + k];
                *v = (*v as u64 * inv % q) as u32;
            }
            let pivot_row: Vec<u32> = self.row(rank)[c..].to_vec();
            for r in 0..self.rows {
                if r == rank {
                    continue;
                }
                let factor = self.data[r * cols + c] as u64;
                if factor == 0 {
                    continue;
                }
                let dst = &mut self.data[r * cols + c..(r + 1) * cols];
                for (d, &s) in dst.iter_mut().zip(&pivot_row) {
                    let sub = factor * s as u64 % q;
                    *d = ((*d as u64 + q - sub) % q) as u32;
                }
            }
            rank += 1;
        }
        rank
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}
