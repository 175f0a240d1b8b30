//! Row-major dense real matrices.

use std::fmt::Write as _;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A dense real matrix stored row by row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        DenseMatrix { n_rows, n_cols, entries: vec![0.0; n_rows * n_cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> f64>(n_rows: usize, n_cols: usize, mut f: F) -> Self {
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                entries.push(f(i, j));
            }
        }
        DenseMatrix { n_rows, n_cols, entries }
    }

    pub fn from_row_major(n_rows: usize, n_cols: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n_rows * n_cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {n_rows}x{n_cols} matrix",
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite entry at flat index {pos}")));
        }
        Ok(DenseMatrix { n_rows, n_cols, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::from_row_major(n_rows, n_cols, rows.concat())
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { 0.0 })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n_rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n_cols, self.n_rows, |i, j| self[(j, i)])
    }

    /// Copy of the `rows x cols` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Overwrite the block starting at `(r0, c0)` with `src`.
    pub fn set_block(&mut self, r0: usize, c0: usize, src: &DenseMatrix) {
        for i in 0..src.n_rows {
            for j in 0..src.n_cols {
                self[(r0 + i, c0 + j)] = src[(i, j)];
            }
        }
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.n_cols != other.n_rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.n_rows, self.n_cols, other.n_rows, other.n_cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            let out_row = &mut out.entries[i * other.n_cols..(i + 1) * other.n_cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n_cols, "matvec dimension mismatch");
        (0..self.n_rows).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        DenseMatrix { entries: self.entries.iter().map(|v| v * factor).collect(), ..self.clone() }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n_rows.min(self.n_cols)).map(|i| self[(i, i)]).sum()
    }

    /// `max |A_ij - A_ji|`; infinite for non-square input.
    pub fn asymmetry(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.n_rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry() == 0.0
    }

    /// `(A + A^T) / 2`.
    pub fn symmetrized(&self) -> Self {
        Self::from_fn(self.n_rows, self.n_cols, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }

    /// `max |A_ij - B_ij|`.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.n_rows, self.n_cols), (other.n_rows, other.n_cols));
        self.entries.iter().zip(&other.entries).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Rows in CSV, full round-trip precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n_rows {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:?}")).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split(',')
                    .map(|v| v.trim().parse::<f64>().map_err(|e| Error::InvalidArgument(format!("bad CSV value `{v}`: {e}"))))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&rows)
    }

    /// JSON envelope `{n_rows, n_cols, entries}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: DenseMatrix = serde_json::from_str(text).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Self::from_row_major(raw.n_rows, raw.n_cols, raw.entries)
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.n_rows && j < self.n_cols);
        &self.entries[i * self.n_cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.n_rows && j < self.n_cols);
        &mut self.entries[i * self.n_cols + j]
    }
}

fn zip_with(a: &DenseMatrix, b: &DenseMatrix, op: impl Fn(f64, f64) -> f64) -> DenseMatrix {
    assert_eq!((a.n_rows, a.n_cols), (b.n_rows, b.n_cols), "shape mismatch");
    DenseMatrix {
        n_rows: a.n_rows,
        n_cols: a.n_cols,
        entries: a.entries.iter().zip(&b.entries).map(|(x, y)| op(*x, *y)).collect(),
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;

    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        zip_with(self, rhs, |a, b| a + b)
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;

    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        zip_with(self, rhs, |a, b| a - b)
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    /// Panics on a shape mismatch; use [`DenseMatrix::matmul`] for a checked product.
    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let b = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!((&a * &b).to_rows(), vec![vec![2.0, 1.0], vec![4.0, 3.0]]);
        assert_eq!(a.transpose().to_rows(), vec![vec![1.0, 3.0], vec![2.0, 4.0]]);
        assert_eq!(a.trace(), 5.0);
        assert_eq!(a.asymmetry(), 1.0);
        assert!(a.matmul(&DenseMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn csv_and_json_round_trip() {
        let a = DenseMatrix::from_rows(&[vec![0.1, -2.5, 1e-300], vec![3.0, 4.0, 7.25]]).unwrap();
        assert_eq!(DenseMatrix::from_csv(&a.to_csv()).unwrap(), a);
        let json = a.to_json();
        assert!(json.contains("\"n_rows\":2") && json.contains("\"n_cols\":3"));
        assert_eq!(DenseMatrix::from_json(&json).unwrap(), a);
        assert!(DenseMatrix::from_json(r#"{"n_rows":2,"n_cols":2,"entries":[1.0]}"#).is_err());
    }

    #[test]
    fn blocks() {
        let a = DenseMatrix::from_fn(4, 4, |i, j| (4 * i + j) as f64);
        let b = a.block(1, 2, 2, 2);
        assert_eq!(b.to_rows(), vec![vec![6.0, 7.0], vec![10.0, 11.0]]);
        let mut z = DenseMatrix::zeros(4, 4);
        z.set_block(1, 2, &b);
        assert_eq!(z[(2, 3)], 11.0);
        assert_eq!(z[(0, 0)], 0.0);
    }
}
