//! Single-site operators: truncated boson powers and collective-spin matrices.

/// Sparse square matrix stored as per-row `(col, value)` lists.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LocalOp {
    pub rows: Vec<Vec<(usize, f64)>>,
}

impl LocalOp {
    pub fn zeros(dim: usize) -> Self {
        Self {
            rows: vec![Vec::new(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn diagonal(values: impl IntoIterator<Item = f64>) -> Self {
        Self {
            rows: values
                .into_iter()
                .enumerate()
                .map(|(i, v)| vec![(i, v)])
                .collect(),
        }
    }

    /// Accumulate `coef * (spin ⊗ boson)` where the combined index is
    /// `spin_index * boson_dim + boson_index`.
    pub fn add_kron(&mut self, coef: f64, spin: &LocalOp, boson: &LocalOp) {
        let boson_dim = boson.dim();
        assert_eq!(self.dim(), spin.dim() * boson_dim);
        if coef == 0.0 {
            return;
        }
        for (s, spin_row) in spin.rows.iter().enumerate() {
            for (b, boson_row) in boson.rows.iter().enumerate() {
                let row = &mut self.rows[s * boson_dim + b];
                for &(s2, sv) in spin_row {
                    for &(b2, bv) in boson_row {
                        row.push((s2 * boson_dim + b2, coef * sv * bv));
                    }
                }
            }
        }
    }

    /// Sort rows and sum duplicate columns in insertion order.
    pub fn finish(mut self) -> Self {
        for row in &mut self.rows {
            row.sort_by_key(|&(c, _)| c);
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
            for &(c, v) in row.iter() {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|&(_, v)| v != 0.0);
            *row = merged;
        }
        self
    }
}

pub(crate) fn identity(dim: usize) -> LocalOp {
    LocalOp::diagonal(std::iter::repeat_n(1.0, dim))
}

pub(crate) fn boson_number(n_max: usize) -> LocalOp {
    LocalOp::diagonal((0..=n_max).map(|n| n as f64))
}

/// `P (a + a†)^k P` with `P` the projector onto `n <= n_max`.
///
/// Each column is propagated exactly in a space large enough that no path of
/// length `k` leaves it, so only entries beyond the cutoff are discarded.
/// The upper triangle is computed and mirrored, making the result exactly
/// symmetric.
pub(crate) fn boson_quadrature_power(n_max: usize, k: usize) -> LocalOp {
    let ext = n_max + k + 1;
    let mut op = LocalOp::zeros(n_max + 1);
    for n in 0..=n_max {
        let mut v = vec![0.0; ext];
        v[n] = 1.0;
        for _ in 0..k {
            let mut w = vec![0.0; ext];
            for (m, &vm) in v.iter().enumerate() {
                if vm == 0.0 {
                    continue;
                }
                if m + 1 < ext {
                    w[m + 1] += ((m + 1) as f64).sqrt() * vm;
                }
                if m > 0 {
                    w[m - 1] += (m as f64).sqrt() * vm;
                }
            }
            v = w;
        }
        for (m, &vm) in v.iter().enumerate().take(n_max + 1).skip(n) {
            if vm != 0.0 {
                op.rows[n].push((m, vm));
                if m != n {
                    op.rows[m].push((n, vm));
                }
            }
        }
    }
    op.finish()
}

/// Collective spin `j = N/2` in the basis `|j, m>` with index 0 at `m = -j`.
pub(crate) struct CollectiveSpin {
    pub sz: LocalOp,
    pub sx: LocalOp,
}

pub(crate) fn collective_spin(qubits: usize) -> CollectiveSpin {
    let j = qubits as f64 / 2.0;
    let m = |k: usize| -j + k as f64;
    let sz = LocalOp::diagonal((0..=qubits).map(m));
    let mut sx = LocalOp::zeros(qubits + 1);
    for k in 0..qubits {
        let mk = m(k);
        let raise = (j * (j + 1.0) - mk * (mk + 1.0)).sqrt() / 2.0;
        sx.rows[k].push((k + 1, raise));
        sx.rows[k + 1].push((k, raise));
    }
    CollectiveSpin {
        sz,
        sx: sx.finish(),
    }
}
