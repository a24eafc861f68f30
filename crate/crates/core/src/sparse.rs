//! Compressed sparse row matrices with a fixed, precomputed pattern.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Rows above this size use a parallel product.
const PARALLEL_ROWS: usize = 20_000;

#[derive(Debug, Clone, Default)]
pub struct PatternBuilder {
    rows: Vec<Vec<usize>>,
}

impl PatternBuilder {
    pub fn new(n: usize) -> Self {
        Self {
            rows: vec![Vec::new(); n],
        }
    }

    /// Couples every pair in `dofs`, including each with itself.
    pub fn insert_clique(&mut self, dofs: &[usize]) {
        for &i in dofs {
            self.rows[i].extend_from_slice(dofs);
        }
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        self.rows[i].push(j);
    }

    pub fn build(self) -> CsrMatrix {
        let n = self.rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        row_ptr.push(0);
        for mut row in self.rows {
            row.sort_unstable();
            row.dedup();
            col_idx.extend(row);
            row_ptr.push(col_idx.len());
        }
        let nnz = col_idx.len();
        CsrMatrix {
            nrows: n,
            ncols: n,
            row_ptr,
            col_idx,
            values: vec![0.0; nnz],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    /// Sums duplicate entries.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nrows];
        for &(i, j, v) in triplets {
            if i >= nrows || j >= ncols {
                return Err(Error::Dimension(format!("entry ({i}, {j}) outside {nrows}x{ncols}")));
            }
            rows[i].push((j, v));
        }
        let mut row_ptr = vec![0];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for mut row in rows {
            row.sort_by_key(|e| e.0);
            for (j, v) in row {
                if col_idx.len() > *row_ptr.last().unwrap() && *col_idx.last().unwrap() == j {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn from_dense(a: &[Vec<f64>]) -> Self {
        let n = a.len();
        let m = a.first().map_or(0, Vec::len);
        let triplets: Vec<_> = a
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0.0)
                    .map(move |(j, v)| (i, j, *v))
            })
            .collect();
        Self::from_triplets(n, m, &triplets).expect("in range by construction")
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    fn position(&self, i: usize, j: usize) -> Option<usize> {
        let start = self.row_ptr[i];
        let cols = &self.col_idx[start..self.row_ptr[i + 1]];
        cols.binary_search(&j).ok().map(|k| start + k)
    }

    /// Adds into an existing pattern entry.
    ///
    /// # Panics
    /// If `(i, j)` is not part of the pattern.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self
            .position(i, j)
            .unwrap_or_else(|| panic!("entry ({i}, {j}) not in sparsity pattern"));
        self.values[k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.position(i, j).map_or(0.0, |k| self.values[k])
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows).map(|i| self.get(i, i)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Mutable access to one row's columns (read-only) and values.
    pub fn row_mut(&mut self, i: usize) -> (&[usize], &mut [f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &mut self.values[r])
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        let row_dot = |i: usize| -> f64 {
            let (c, v) = self.row(i);
            c.iter().zip(v).map(|(j, a)| a * x[*j]).sum()
        };
        if self.nrows >= PARALLEL_ROWS {
            y.par_iter_mut().enumerate().for_each(|(i, yi)| *yi = row_dot(i));
        } else {
            y.iter_mut().enumerate().for_each(|(i, yi)| *yi = row_dot(i));
        }
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        self.matvec(x, &mut y);
        y
    }

    /// Largest `|a_ij - a_ji|` over stored entries.
    pub fn asymmetry(&self) -> f64 {
        if self.nrows != self.ncols {
            return f64::INFINITY;
        }
        (0..self.nrows)
            .map(|i| {
                let (c, v) = self.row(i);
                c.iter()
                    .zip(v)
                    .map(|(j, a)| (a - self.get(*j, i)).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// `asymmetry <= rel_tol * max_abs`.
    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        self.asymmetry() <= rel_tol * self.max_abs()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.ncols]; self.nrows];
        for (i, row) in out.iter_mut().enumerate() {
            let (c, v) = self.row(i);
            for (j, a) in c.iter().zip(v) {
                row[*j] += a;
            }
        }
        out
    }

    /// One `row col value` line per stored entry, zero-based.
    pub fn write_coordinate(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "% {} {} {}", self.nrows, self.ncols, self.nnz())?;
        for i in 0..self.nrows {
            let (c, v) = self.row(i);
            for (j, a) in c.iter().zip(v) {
                writeln!(w, "{i} {j} {a:e}")?;
            }
        }
        Ok(())
    }
}
