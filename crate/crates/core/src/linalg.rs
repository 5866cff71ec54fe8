//! Gaussian elimination over a [`Scalar`] field.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

/// Dense row-major matrix over a field.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Scalar> DenseMatrix<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![C::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C) {
        self.data[i * self.cols + j] = v;
    }

    fn row_mut(&mut self, i: usize) -> &mut [C] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Solves `self · X = B` for every column `b` of `rhs`.
    ///
    /// Returns `None` unless the system has exactly one solution for each
    /// right-hand side (full column rank and consistent).
    pub fn solve(&self, rhs: &[Vec<C>]) -> Option<Vec<Vec<C>>> {
        let n = self.cols;
        let k = rhs.len();
        let width = n + k;
        let mut aug = DenseMatrix::zeros(self.rows, width);
        for i in 0..self.rows {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            for (c, b) in rhs.iter().enumerate() {
                aug.set(i, n + c, b[i].clone());
            }
        }
        let pivots = aug.row_reduce(n);
        if pivots.len() < n {
            return None;
        }
        // inconsistent rows: zero on the left, nonzero on the right
        for i in n..aug.rows {
            if (n..width).any(|j| !aug.get(i, j).is_negligible()) {
                return None;
            }
        }
        let solutions = (0..k)
            .map(|c| (0..n).map(|i| aug.get(i, n + c).clone()).collect())
            .collect();
        Some(solutions)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce(self.cols).len()
    }

    /// Reduced row echelon form on the first `limit` columns; returns pivot columns.
    fn row_reduce(&mut self, limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..limit {
            if row == self.rows {
                break;
            }
            let best = (row..self.rows)
                .filter(|&i| !self.get(i, col).is_negligible())
                .max_by(|&a, &b| {
                    self.get(a, col)
                        .pivot_weight()
                        .total_cmp(&self.get(b, col).pivot_weight())
                });
            let Some(p) = best else { continue };
            if p != row {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, row * self.cols + j);
                }
            }
            let inv = C::one() / self.get(row, col).clone();
            for v in self.row_mut(row).iter_mut() {
                *v = v.clone() * inv.clone();
            }
            let pivot_row: Vec<C> = self.row_mut(row).to_vec();
            for i in 0..self.rows {
                if i == row {
                    continue;
                }
                let factor = self.get(i, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for (v, p) in self.row_mut(i).iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *v = v.clone() - factor.clone() * p.clone();
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }
}

/// Rank of a sparse matrix given by its columns (row index → value).
pub fn sparse_rank<C: Scalar>(columns: Vec<BTreeMap<usize, C>>) -> usize {
    // pivot row → reduced column with that leading row
    let mut basis: BTreeMap<usize, BTreeMap<usize, C>> = BTreeMap::new();
    for mut col in columns {
        loop {
            col.retain(|_, v| !v.is_negligible());
            let Some((&lead, lead_val)) = col.iter().next() else {
                break;
            };
            match basis.get(&lead) {
                None => {
                    basis.insert(lead, col);
                    break;
                }
                Some(pivot) => {
                    let factor = lead_val.clone() / pivot[&lead].clone();
                    for (&r, pv) in pivot {
                        let entry = col.entry(r).or_insert_with(C::zero);
                        *entry = entry.clone() - factor.clone() * pv.clone();
                    }
                }
            }
        }
    }
    basis.len()
}
