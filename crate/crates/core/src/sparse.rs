//! Real sparse operators in compressed-sparse-row form.

use std::io::{BufRead, Write};

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::{Error, Result};

/// Rows handed to one rayon task in [`SparseOperator::apply`].
const MATVEC_CHUNK: usize = 4096;

/// Real operator stored as CSR with sorted, duplicate-free rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    values: Vec<f64>,
    hermitian: bool,
}

impl SparseOperator {
    /// Assemble from per-row `(col, value)` lists. Rows need not be sorted;
    /// duplicates are summed and exact zeros dropped.
    pub fn from_rows(dim: usize, rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        if rows.len() != dim {
            return Err(Error::InvalidOperator(format!(
                "expected {dim} rows, got {}",
                rows.len()
            )));
        }
        if dim > u32::MAX as usize {
            return Err(Error::TooLarge {
                dim,
                limit: u32::MAX as usize,
            });
        }
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let nnz_hint = rows.iter().map(Vec::len).sum();
        let mut col_idx = Vec::with_capacity(nnz_hint);
        let mut values = Vec::with_capacity(nnz_hint);
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let mut current: Option<(usize, f64)> = None;
            for (c, v) in row {
                if c >= dim {
                    return Err(Error::InvalidOperator(format!(
                        "column {c} out of range for dimension {dim}"
                    )));
                }
                match current {
                    Some((cc, ref mut acc)) if cc == c => *acc += v,
                    _ => {
                        if let Some((cc, acc)) = current.take() {
                            if acc != 0.0 {
                                col_idx.push(cc as u32);
                                values.push(acc);
                            }
                        }
                        current = Some((c, v));
                    }
                }
            }
            if let Some((cc, acc)) = current {
                if acc != 0.0 {
                    col_idx.push(cc as u32);
                    values.push(acc);
                }
            }
            row_ptr.push(col_idx.len());
        }
        let mut op = Self {
            dim,
            row_ptr,
            col_idx,
            values,
            hermitian: false,
        };
        op.hermitian = op.check_symmetric();
        Ok(op)
    }

    pub fn from_triplets(dim: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut rows = vec![Vec::new(); dim];
        for &(r, c, v) in triplets {
            let row = rows.get_mut(r).ok_or_else(|| {
                Error::InvalidOperator(format!("row {r} out of range for dimension {dim}"))
            })?;
            row.push((c, v));
        }
        Self::from_rows(dim, rows)
    }

    pub fn diagonal_matrix(entries: &[f64]) -> Self {
        let rows = entries
            .iter()
            .enumerate()
            .map(|(i, &v)| vec![(i, v)])
            .collect();
        Self::from_rows(entries.len(), rows).expect("diagonal rows are in range")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// True when every stored entry has its exact transpose partner.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()]
            .iter()
            .zip(&self.values[span])
            .map(|(&c, &v)| (c as usize, v))
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[span.clone()].binary_search(&(c as u32)) {
            Ok(k) => self.values[span.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|r| self.get(r, r)).collect()
    }

    /// Principal submatrix on the ascending index list `keep`.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let mut map = vec![u32::MAX; self.dim];
        for (k, &i) in keep.iter().enumerate() {
            map[i] = k as u32;
        }
        let rows = keep
            .iter()
            .map(|&r| {
                self.row(r)
                    .filter(|&(c, _)| map[c] != u32::MAX)
                    .map(|(c, v)| (map[c] as usize, v))
                    .collect()
            })
            .collect();
        Self::from_rows(keep.len(), rows)
    }

    /// Largest absolute row sum, an upper bound on the spectral radius.
    pub fn max_abs_row_sum(&self) -> f64 {
        (0..self.dim)
            .map(|r| self.row(r).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    fn check_symmetric(&self) -> bool {
        (0..self.dim)
            .into_par_iter()
            .all(|r| self.row(r).all(|(c, v)| c == r || self.get(c, r) == v))
    }

    /// `y = A x`. Rows are split across threads; each output entry is a
    /// sequential dot product, so the result does not depend on scheduling.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        y.par_chunks_mut(MATVEC_CHUNK)
            .enumerate()
            .for_each(|(chunk, out)| {
                let base = chunk * MATVEC_CHUNK;
                for (i, yi) in out.iter_mut().enumerate() {
                    let r = base + i;
                    let mut acc = 0.0;
                    for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                        acc += self.values[k] * x[self.col_idx[k] as usize];
                    }
                    *yi = acc;
                }
            });
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        self.apply(x, &mut y);
        y
    }

    /// `<x|A|x>`.
    pub fn expectation(&self, x: &[f64]) -> f64 {
        let ax = self.mul_vec(x);
        ax.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] += v;
        }
        m
    }

    /// Max-norm of `[A, P]` for a diagonal `P`.
    pub fn commutator_with_diagonal(&self, diag: &[f64]) -> f64 {
        assert_eq!(diag.len(), self.dim);
        self.triplets()
            .map(|(r, c, v)| (v * (diag[c] - diag[r])).abs())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise difference to another operator of the same size.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        let a = self.triplets().map(|(r, c, v)| (v - other.get(r, c)).abs());
        let b = other.triplets().map(|(r, c, v)| (v - self.get(r, c)).abs());
        a.chain(b).fold(0.0, f64::max)
    }

    /// Coordinate-list text export: a `dim nnz` header, then `row col value`
    /// lines with round-trip float formatting.
    pub fn write_coo<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {}", self.dim, self.nnz())?;
        for (r, c, v) in self.triplets() {
            writeln!(out, "{r} {c} {v:e}")?;
        }
        Ok(())
    }

    pub fn read_coo<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidData("empty coordinate file".into()))??;
        let mut head = header.split_whitespace().map(str::parse::<usize>);
        let (dim, nnz) = match (head.next(), head.next()) {
            (Some(Ok(d)), Some(Ok(n))) => (d, n),
            _ => return Err(Error::InvalidData(format!("bad header line {header:?}"))),
        };
        let mut triplets = Vec::with_capacity(nnz);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parsed = (|| {
                let r = it.next()?.parse().ok()?;
                let c = it.next()?.parse().ok()?;
                let v = it.next()?.parse().ok()?;
                Some((r, c, v))
            })();
            triplets.push(parsed.ok_or_else(|| Error::InvalidData(format!("bad entry {line:?}")))?);
        }
        if triplets.len() != nnz {
            return Err(Error::InvalidData(format!(
                "header announces {nnz} entries, found {}",
                triplets.len()
            )));
        }
        Self::from_triplets(dim, &triplets)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
