//! Dense matrices over `F_q`: row reduction, rank, inverse, nullspace.

use crate::ff::{FieldContext, FieldElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![FieldElem::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FieldElem::ONE);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<FieldElem>], cols: usize) -> Self {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols);
            m.data[i * cols..(i + 1) * cols].copy_from_slice(row);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, f: &FieldContext, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = f.add(out.get(i, j), f.mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &FieldContext, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = FieldElem::ZERO;
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = f.add(acc, f.mul(*a, *b));
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self, f: &FieldContext) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&i| !self.get(i, col).is_zero()) else {
                continue;
            };
            if piv != row {
                for j in 0..self.cols {
                    self.data.swap(piv * self.cols + j, row * self.cols + j);
                }
            }
            let inv = f.inv(self.get(row, col)).unwrap();
            for j in col..self.cols {
                let v = f.mul(self.get(row, j), inv);
                self.set(row, j, v);
            }
            for i in 0..self.rows {
                if i == row {
                    continue;
                }
                let factor = self.get(i, col);
                if factor.is_zero() {
                    continue;
                }
                for j in col..self.cols {
                    let b = self.get(row, j);
                    if !b.is_zero() {
                        let v = f.sub(self.get(i, j), f.mul(factor, b));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &FieldContext) -> usize {
        self.clone().rref(f).len()
    }

    pub fn inverse(&self, f: &FieldContext) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, FieldElem::ONE);
        }
        let pivots = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j));
            }
        }
        Some(out)
    }

    /// Basis of `{v : self * v = 0}`.
    pub fn nullspace(&self, f: &FieldContext) -> Vec<Vec<FieldElem>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![FieldElem::ZERO; self.cols];
                v[fc] = FieldElem::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.get(r, fc));
                }
                v
            })
            .collect()
    }
}

/// Rank of a family of vectors of equal length.
pub fn rank_of(f: &FieldContext, vectors: &[Vec<FieldElem>], len: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(vectors, len).rank(f)
}
