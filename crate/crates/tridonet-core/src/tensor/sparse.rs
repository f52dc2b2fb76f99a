//! CSR sparse matrices for the projection operators.
//!
//! A [`SparsePair`] holds a matrix together with its explicit transpose so the
//! forward projector and its adjoint share one set of interpolation weights —
//! the pairing is what makes the adjoint exact.

use std::sync::Arc;

use rayon::prelude::*;

use crate::util::pool;

/// Compressed sparse row matrix, f64 values, u32 column indices.
#[derive(Clone)]
pub struct Csr {
    pub rows: usize,
    pub cols: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<u32>,
    pub values: Vec<f64>,
}

impl Csr {
    /// Build from per-row (column, value) entries; duplicate columns are merged.
    pub fn from_rows(rows: usize, cols: usize, mut entries: Vec<Vec<(u32, f64)>>) -> Self {
        assert_eq!(entries.len(), rows);
        let mut indptr = Vec::with_capacity(rows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for row in entries.iter_mut() {
            row.sort_unstable_by_key(|&(c, _)| c);
            let mut last: Option<u32> = None;
            for &(c, v) in row.iter() {
                debug_assert!((c as usize) < cols);
                if last == Some(c) {
                    *values.last_mut().unwrap() += v;
                } else {
                    indices.push(c);
                    values.push(v);
                    last = Some(c);
                }
            }
            indptr.push(indices.len());
        }
        Csr { rows, cols, indptr, indices, values }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn transposed(&self) -> Csr {
        let mut counts = vec![0usize; self.cols];
        for &c in &self.indices {
            counts[c as usize] += 1;
        }
        let mut indptr = vec![0usize; self.cols + 1];
        for i in 0..self.cols {
            indptr[i + 1] = indptr[i] + counts[i];
        }
        let mut indices = vec![0u32; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        let mut cursor = indptr.clone();
        for r in 0..self.rows {
            for k in self.indptr[r]..self.indptr[r + 1] {
                let c = self.indices[k] as usize;
                indices[cursor[c]] = r as u32;
                values[cursor[c]] = self.values[k];
                cursor[c] += 1;
            }
        }
        Csr { rows: self.cols, cols: self.rows, indptr, indices, values }
    }

    /// y = A·x. Rows are independent, so the row-parallel split is
    /// deterministic regardless of worker count.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "spmv input length");
        let mut y = vec![0.0; self.rows];
        pool().install(|| {
            y.par_iter_mut().enumerate().for_each(|(r, out)| {
                let mut acc = 0.0;
                for k in self.indptr[r]..self.indptr[r + 1] {
                    acc += self.values[k] * x[self.indices[k] as usize];
                }
                *out = acc;
            });
        });
        y
    }
}

/// A matrix and its transpose, sharing weights.
pub struct SparsePair {
    pub fwd: Csr,
    pub adj: Csr,
}

impl SparsePair {
    pub fn new(fwd: Csr) -> Arc<Self> {
        let adj = fwd.transposed();
        Arc::new(SparsePair { fwd, adj })
    }
}
