//! Ordering convention of the truncated tensor-product basis.
//!
//! * Sites are ordered with site 0 varying slowest.
//! * Within a site the spin index varies slower than the boson index, so the
//!   local index is `spin * (n_max + 1) + n`.
//! * Boson index `n` runs over `0..=n_max`.
//! * A single qubit has `↓ = 0`, `↑ = 1`. A collective spin of `N` qubits
//!   uses the symmetric multiplet `|N/2, m>` with index 0 at `m = -N/2`.
//! * Purely bosonic models have a one-dimensional spin factor.
//!
//! Spin index 0 is the spin ground state, so the spin index doubles as the
//! spin excitation count in the parity operator.

use serde::Serialize;

use crate::model::{FockTruncation, SystemShape};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Basis {
    sites: usize,
    spin_dim: usize,
    boson_dim: usize,
}

/// Local state of one site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SiteState {
    pub spin: usize,
    pub bosons: usize,
}

impl Basis {
    pub fn new(sites: usize, spin_dim: usize, boson_dim: usize) -> Result<Self> {
        if sites == 0 || spin_dim == 0 || boson_dim == 0 {
            return Err(Error::InvalidParameter(
                "basis factors must be non-empty".into(),
            ));
        }
        Ok(Self {
            sites,
            spin_dim,
            boson_dim,
        })
    }

    /// Qubit (or collective spin) plus one boson mode per site.
    pub fn for_shape(shape: &SystemShape, trunc: FockTruncation) -> Self {
        Self {
            sites: shape.sites,
            spin_dim: shape.qubits_per_site + 1,
            boson_dim: trunc.boson_dim(),
        }
    }

    /// Boson modes only.
    pub fn bosonic(sites: usize, trunc: FockTruncation) -> Self {
        Self {
            sites,
            spin_dim: 1,
            boson_dim: trunc.boson_dim(),
        }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn spin_dim(&self) -> usize {
        self.spin_dim
    }

    pub fn boson_dim(&self) -> usize {
        self.boson_dim
    }

    pub fn local_dim(&self) -> usize {
        self.spin_dim * self.boson_dim
    }

    /// Total dimension, or `None` on overflow.
    pub fn checked_dim(&self) -> Option<usize> {
        (0..self.sites).try_fold(1usize, |acc, _| acc.checked_mul(self.local_dim()))
    }

    pub fn dim(&self) -> usize {
        self.checked_dim().expect("basis dimension overflows usize")
    }

    /// Index step for a unit change of the local index on `site`.
    pub fn stride(&self, site: usize) -> usize {
        self.local_dim().pow((self.sites - 1 - site) as u32)
    }

    pub fn local_index(&self, index: usize, site: usize) -> usize {
        (index / self.stride(site)) % self.local_dim()
    }

    pub fn site_state(&self, index: usize, site: usize) -> SiteState {
        let l = self.local_index(index, site);
        SiteState {
            spin: l / self.boson_dim,
            bosons: l % self.boson_dim,
        }
    }

    pub fn decode(&self, index: usize) -> Vec<SiteState> {
        (0..self.sites).map(|s| self.site_state(index, s)).collect()
    }

    pub fn index(&self, states: &[SiteState]) -> usize {
        assert_eq!(states.len(), self.sites);
        states.iter().fold(0, |acc, st| {
            assert!(st.spin < self.spin_dim && st.bosons < self.boson_dim);
            acc * self.local_dim() + st.spin * self.boson_dim + st.bosons
        })
    }

    /// Copy `v` into the basis `larger`, which may only have a higher boson
    /// cutoff. States beyond the old cutoff get zero amplitude.
    pub fn embed(&self, larger: &Basis, v: &[f64]) -> Vec<f64> {
        assert!(
            larger.sites == self.sites
                && larger.spin_dim == self.spin_dim
                && larger.boson_dim >= self.boson_dim
        );
        assert_eq!(v.len(), self.dim());
        let mut out = vec![0.0; larger.dim()];
        for (i, &x) in v.iter().enumerate() {
            let states = self.decode(i);
            out[larger.index(&states)] = x;
        }
        out
    }

    /// `(-1)^{sum_j (spin_j + n_j)}` for every basis state.
    pub fn parity_signs(&self) -> Vec<f64> {
        let dim = self.dim();
        let local: Vec<f64> = (0..self.local_dim())
            .map(|l| {
                if (l / self.boson_dim + l % self.boson_dim) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            })
            .collect();
        (0..dim)
            .map(|i| {
                (0..self.sites)
                    .map(|s| local[self.local_index(i, s)])
                    .product()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Boundary;

    #[test]
    fn embed_preserves_site_states() {
        let small = Basis::for_shape(&SystemShape::dimer(), FockTruncation::new(2).unwrap());
        let large = Basis::for_shape(&SystemShape::dimer(), FockTruncation::new(5).unwrap());
        let v: Vec<f64> = (0..small.dim()).map(|i| i as f64 + 1.0).collect();
        let w = small.embed(&large, &v);
        assert_eq!(w.iter().filter(|x| **x != 0.0).count(), small.dim());
        for (i, &x) in v.iter().enumerate() {
            assert_eq!(w[large.index(&small.decode(i))], x);
        }
        let ps = small.parity_signs();
        let pl = large.parity_signs();
        for i in 0..small.dim() {
            assert_eq!(ps[i], pl[large.index(&small.decode(i))]);
        }
    }

    #[test]
    fn ordering_convention() {
        let b = Basis::for_shape(&SystemShape::dimer(), FockTruncation::new(3).unwrap());
        assert_eq!(b.dim(), 64);
        assert_eq!(b.stride(0), 8);
        assert_eq!(b.stride(1), 1);
        let st = |spin, bosons| SiteState { spin, bosons };
        // Site 0 slowest, spin slower than bosons.
        assert_eq!(b.index(&[st(0, 0), st(0, 1)]), 1);
        assert_eq!(b.index(&[st(0, 0), st(1, 0)]), 4);
        assert_eq!(b.index(&[st(0, 1), st(0, 0)]), 8);
        assert_eq!(b.index(&[st(1, 0), st(0, 0)]), 32);
        for i in 0..b.dim() {
            assert_eq!(b.index(&b.decode(i)), i);
        }
    }

    #[test]
    fn chain_dimension() {
        let shape = SystemShape::chain(3, Boundary::Open).unwrap();
        let b = Basis::for_shape(&shape, FockTruncation::new(10).unwrap());
        assert_eq!(b.dim(), 8 * 11 * 11 * 11);
    }

    #[test]
    fn parity_counts_spin_and_bosons() {
        let b = Basis::for_shape(&SystemShape::dimer(), FockTruncation::new(2).unwrap());
        let signs = b.parity_signs();
        let st = |spin, bosons| SiteState { spin, bosons };
        assert_eq!(signs[b.index(&[st(0, 0), st(0, 0)])], 1.0);
        assert_eq!(signs[b.index(&[st(1, 0), st(0, 0)])], -1.0);
        assert_eq!(signs[b.index(&[st(1, 1), st(0, 2)])], 1.0);
    }
}
