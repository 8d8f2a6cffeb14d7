//! Compressed sparse row storage, built from triplets.

use num_traits::Zero;
use std::ops::{Add, Mul, Neg};

/// Row-compressed sparse matrix with sorted column indices and no stored zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<T>,
}

impl<T> SparseMatrix<T>
where
    T: Copy + Zero + Add<Output = T> + Mul<Output = T> + PartialEq,
{
    /// Duplicate entries are summed; entries that sum to zero are dropped.
    pub fn from_triplets(rows: usize, cols: usize, mut trips: Vec<(usize, usize, T)>) -> Self {
        trips.sort_by_key(|t| (t.0, t.1));
        let mut indptr = vec![0; rows + 1];
        let mut indices = Vec::with_capacity(trips.len());
        let mut values: Vec<T> = Vec::with_capacity(trips.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in trips {
            assert!(
                r < rows && c < cols,
                "triplet ({r},{c}) outside {rows}x{cols}"
            );
            if last == Some((r, c)) {
                let k = values.len() - 1;
                values[k] = values[k] + v;
            } else {
                indptr[r + 1] += 1;
                indices.push(c);
                values.push(v);
                last = Some((r, c));
            }
        }
        for r in 0..rows {
            indptr[r + 1] += indptr[r];
        }
        let mut m = SparseMatrix {
            rows,
            cols,
            indptr,
            indices,
            values,
        };
        m.prune();
        m
    }

    fn prune(&mut self) {
        if self.values.iter().all(|v| !v.is_zero()) {
            return;
        }
        let mut indptr = vec![0; self.rows + 1];
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for r in 0..self.rows {
            for k in self.indptr[r]..self.indptr[r + 1] {
                if !self.values[k].is_zero() {
                    indices.push(self.indices[k]);
                    values.push(self.values[k]);
                }
            }
            indptr[r + 1] = indices.len();
        }
        self.indptr = indptr;
        self.indices = indices;
        self.values = values;
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_triplets(rows, cols, Vec::new())
    }

    pub fn identity(n: usize) -> Self
    where
        T: num_traits::One,
    {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, T::one())).collect())
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

    /// `(column, value)` pairs of row `r`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        let span = self.indptr[r]..self.indptr[r + 1];
        match self.indices[span.clone()].binary_search(&c) {
            Ok(k) => self.values[span.start + k],
            Err(_) => T::zero(),
        }
    }

    /// All stored entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn transpose(&self) -> Self {
        let trips = self.triplets().map(|(r, c, v)| (c, r, v)).collect();
        Self::from_triplets(self.cols, self.rows, trips)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut trips = Vec::new();
        let mut acc: Vec<Option<T>> = vec![None; other.cols];
        let mut touched = Vec::new();
        for r in 0..self.rows {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    match &mut acc[c] {
                        Some(x) => *x = *x + a * b,
                        slot @ None => {
                            *slot = Some(a * b);
                            touched.push(c);
                        }
                    }
                }
            }
            for &c in &touched {
                if let Some(v) = acc[c].take() {
                    trips.push((r, c, v));
                }
            }
            touched.clear();
        }
        Self::from_triplets(self.rows, other.cols, trips)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let trips = self.triplets().chain(other.triplets()).collect();
        Self::from_triplets(self.rows, self.cols, trips)
    }

    pub fn sub(&self, other: &Self) -> Self
    where
        T: Neg<Output = T>,
    {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let trips = self
            .triplets()
            .chain(other.triplets().map(|(r, c, v)| (r, c, -v)))
            .collect();
        Self::from_triplets(self.rows, self.cols, trips)
    }

    pub fn map<U, F>(&self, f: F) -> SparseMatrix<U>
    where
        U: Copy + Zero + Add<Output = U> + Mul<Output = U> + PartialEq,
        F: Fn(T) -> U,
    {
        let trips = self.triplets().map(|(r, c, v)| (r, c, f(v))).collect();
        SparseMatrix::from_triplets(self.rows, self.cols, trips)
    }

    /// Keeps entries whose row and column pass the predicates.
    pub fn restrict<R, C>(&self, keep_row: R, keep_col: C) -> Self
    where
        R: Fn(usize) -> bool,
        C: Fn(usize) -> bool,
    {
        let trips = self
            .triplets()
            .filter(|&(r, c, _)| keep_row(r) && keep_col(c))
            .collect();
        Self::from_triplets(self.rows, self.cols, trips)
    }

    /// Leading `rows × cols` block.
    pub fn leading_block(&self, rows: usize, cols: usize) -> Self {
        let trips = self
            .triplets()
            .filter(|&(r, c, _)| r < rows && c < cols)
            .collect();
        Self::from_triplets(rows, cols, trips)
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i))
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut d = vec![vec![T::zero(); self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            d[r][c] = v;
        }
        d
    }
}

impl SparseMatrix<f64> {
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (r, yr) in y.iter_mut().enumerate().take(self.rows) {
            let mut s = 0.0;
            for k in self.indptr[r]..self.indptr[r + 1] {
                s += self.values[k] * x[self.indices[k]];
            }
            *yr = s;
        }
    }

    /// Largest absolute row sum, an upper bound on the spectral norm of a symmetric matrix.
    pub fn max_abs_row_sum(&self) -> f64 {
        (0..self.rows)
            .map(|r| self.row(r).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl SparseMatrix<i64> {
    pub fn to_f64(&self) -> SparseMatrix<f64> {
        self.map(|v| v as f64)
    }

    pub fn max_abs_row_sum(&self) -> i64 {
        (0..self.rows)
            .map(|r| self.row(r).map(|(_, v)| v.abs()).sum::<i64>())
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = a.len();
        let m = b[0].len();
        let k = b.len();
        (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn duplicates_sum_and_zeros_drop() {
        let m =
            SparseMatrix::from_triplets(2, 2, vec![(0, 0, 1i64), (0, 0, -1), (1, 0, 2), (1, 0, 3)]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 0), 5);
        assert_eq!(m.get(0, 0), 0);
    }

    proptest! {
        #[test]
        fn matmul_matches_dense(
            a in proptest::collection::vec(-2i64..3, 12),
            b in proptest::collection::vec(-2i64..3, 12),
        ) {
            let ta: Vec<_> = a.iter().enumerate().map(|(k, &v)| (k / 4, k % 4, v)).collect();
            let tb: Vec<_> = b.iter().enumerate().map(|(k, &v)| (k / 3, k % 3, v)).collect();
            let sa = SparseMatrix::from_triplets(3, 4, ta);
            let sb = SparseMatrix::from_triplets(4, 3, tb);
            let expect = dense_mul(&sa.to_dense(), &sb.to_dense());
            prop_assert_eq!(sa.matmul(&sb).to_dense(), expect);
            prop_assert_eq!(sa.transpose().transpose(), sa.clone());
            let sym = sa.matmul(&sa.transpose());
            prop_assert!(sym.is_symmetric());
        }
    }
}
