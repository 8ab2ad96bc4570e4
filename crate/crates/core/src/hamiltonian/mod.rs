//! Hamiltonian builders over the truncated tensor-product basis described in
//! [`basis`].
//!
//! Every builder assembles `P H P`, where `P` projects each cavity onto
//! `n <= n_max`. Powers of `a + a†` are projected after being formed, so the
//! truncated operator is the exact compression of the untruncated one and
//! ground energies can only decrease as `n_max` grows.

pub mod basis;
mod local;

use rayon::prelude::*;
use serde::Serialize;

use crate::analytics::bosonic_stability_margin;
use crate::model::{Boundary, FockTruncation, ModelParams, SystemShape};
use crate::sparse::SparseOperator;
use crate::{Error, Result};

pub use basis::{Basis, SiteState};
use local::{boson_number, boson_quadrature_power, collective_spin, identity, LocalOp};

/// Largest basis any builder will assemble.
pub const DEFAULT_DIM_LIMIT: usize = 4_000_000;

/// Rows assembled per rayon task.
const ASSEMBLY_CHUNK: usize = 2048;

/// Sum of one local operator on every site plus `hop * X_a X_b` on every bond.
fn assemble(
    basis: &Basis,
    site_op: &LocalOp,
    bonds: &[(usize, usize)],
    hop: f64,
    limit: usize,
) -> Result<SparseOperator> {
    let dim = basis
        .checked_dim()
        .filter(|&d| d <= limit)
        .ok_or(Error::TooLarge {
            dim: basis.checked_dim().unwrap_or(usize::MAX),
            limit,
        })?;
    let local_dim = basis.local_dim();
    assert_eq!(site_op.dim(), local_dim);
    let x = boson_quadrature_power(basis.boson_dim() - 1, 1);
    let x_local = {
        let mut op = LocalOp::zeros(local_dim);
        op.add_kron(1.0, &identity(basis.spin_dim()), &x);
        op.finish()
    };
    let strides: Vec<usize> = (0..basis.sites()).map(|s| basis.stride(s)).collect();
    let bonds: Vec<(usize, usize)> = if hop == 0.0 {
        Vec::new()
    } else {
        bonds.to_vec()
    };

    let build_row = |i: usize| -> Vec<(usize, f64)> {
        let digits: Vec<usize> = strides.iter().map(|&st| (i / st) % local_dim).collect();
        let mut row = Vec::new();
        for (s, &l) in digits.iter().enumerate() {
            let base = i - l * strides[s];
            for &(l2, v) in &site_op.rows[l] {
                row.push((base + l2 * strides[s], v));
            }
        }
        for &(a, b) in &bonds {
            let base = i - digits[a] * strides[a] - digits[b] * strides[b];
            for &(la, va) in &x_local.rows[digits[a]] {
                for &(lb, vb) in &x_local.rows[digits[b]] {
                    row.push((base + la * strides[a] + lb * strides[b], hop * va * vb));
                }
            }
        }
        row
    };

    let rows: Vec<Vec<(usize, f64)>> = (0..dim)
        .into_par_iter()
        .with_min_len(ASSEMBLY_CHUNK)
        .map(build_row)
        .collect();
    SparseOperator::from_rows(dim, rows)
}

fn rabi_site(params: &ModelParams, qubits: usize, n_max: usize) -> LocalOp {
    let spin = collective_spin(qubits);
    let spin_dim = qubits + 1;
    let mut op = LocalOp::zeros(spin_dim * (n_max + 1));
    op.add_kron(params.omega_r, &identity(spin_dim), &boson_number(n_max));
    op.add_kron(params.omega_q, &spin.sz, &identity(n_max + 1));
    op.add_kron(
        2.0 * params.coupling / (qubits as f64).sqrt(),
        &spin.sx,
        &boson_quadrature_power(n_max, 1),
    );
    op.add_kron(
        params.a2_amplitude,
        &identity(spin_dim),
        &boson_quadrature_power(n_max, 2),
    );
    op.finish()
}

fn check_params(params: &ModelParams) -> Result<()> {
    params.validate()
}

/// Rabi dimer with A² terms and hopping.
pub fn build_qrd(params: &ModelParams, trunc: FockTruncation) -> Result<SparseOperator> {
    build_chain(params, &SystemShape::dimer(), trunc)
}

/// `L` single-qubit Rabi cavities with nearest-neighbour hopping.
pub fn build_chain(
    params: &ModelParams,
    shape: &SystemShape,
    trunc: FockTruncation,
) -> Result<SparseOperator> {
    check_params(params)?;
    if shape.qubits_per_site != 1 {
        return Err(Error::InvalidParameter(
            "chain builder expects one qubit per cavity".into(),
        ));
    }
    build_rabi_lattice(params, shape, trunc)
}

/// Dicke dimer in the symmetric spin sector, coupling `g / sqrt(N)`.
pub fn build_dicke_dimer(
    params: &ModelParams,
    shape: &SystemShape,
    trunc: FockTruncation,
) -> Result<SparseOperator> {
    check_params(params)?;
    if shape.sites != 2 {
        return Err(Error::InvalidParameter(format!(
            "Dicke dimer needs 2 cavities, got {}",
            shape.sites
        )));
    }
    build_rabi_lattice(params, shape, trunc)
}

fn build_rabi_lattice(
    params: &ModelParams,
    shape: &SystemShape,
    trunc: FockTruncation,
) -> Result<SparseOperator> {
    let basis = Basis::for_shape(shape, trunc);
    let site = rabi_site(params, shape.qubits_per_site, trunc.n_max);
    assemble(
        &basis,
        &site,
        &shape.bonds(),
        params.hopping,
        DEFAULT_DIM_LIMIT,
    )
}

/// Two cavities with A² terms and hopping, no qubits.
pub fn build_quadratic(params: &ModelParams, trunc: FockTruncation) -> Result<SparseOperator> {
    check_params(params)?;
    let basis = Basis::bosonic(2, trunc);
    let n = trunc.n_max;
    let mut site = LocalOp::zeros(n + 1);
    site.add_kron(params.omega_r, &identity(1), &boson_number(n));
    site.add_kron(
        params.a2_amplitude,
        &identity(1),
        &boson_quadrature_power(n, 2),
    );
    assemble(
        &basis,
        &site.finish(),
        &[(0, 1)],
        params.hopping,
        DEFAULT_DIM_LIMIT,
    )
}

fn effective_site(params: &ModelParams, n_max: usize, lower_branch_only: bool) -> LocalOp {
    let wq = params.omega_q;
    let c2 = params.coupling.powi(2) / wq.powi(2);
    let c4 = params.coupling.powi(4) / wq.powi(4);
    let x2 = boson_quadrature_power(n_max, 2);
    let x4 = boson_quadrature_power(n_max, 4);
    let num = boson_number(n_max);
    let sigma_z = if lower_branch_only {
        LocalOp::diagonal([-1.0])
    } else {
        LocalOp::diagonal([-1.0, 1.0])
    };
    let spin_id = identity(sigma_z.dim());
    let mut op = LocalOp::zeros(sigma_z.dim() * (n_max + 1));
    op.add_kron(params.omega_r / wq, &spin_id, &num);
    op.add_kron(0.5, &sigma_z, &identity(n_max + 1));
    op.add_kron(c2, &sigma_z, &x2);
    op.add_kron(params.a2_amplitude / wq, &spin_id, &x2);
    op.add_kron(-c4, &sigma_z, &x4);
    op.finish()
}

/// Fourth-order effective dimer Hamiltonian in units of `omega_q`.
pub fn build_effective_dimer(
    params: &ModelParams,
    trunc: FockTruncation,
) -> Result<SparseOperator> {
    check_params(params)?;
    let basis = Basis::for_shape(&SystemShape::dimer(), trunc);
    let site = effective_site(params, trunc.n_max, false);
    assemble(
        &basis,
        &site,
        &[(0, 1)],
        params.hopping / params.omega_q,
        DEFAULT_DIM_LIMIT,
    )
}

/// The effective Hamiltonian restricted to both qubits in the lower state.
///
/// The upper branch carries a `-X⁴` term that is unbounded below, so only
/// this block has a ground state that converges in `n_max`.
pub fn build_effective_lower_branch(
    params: &ModelParams,
    shape: &SystemShape,
    trunc: FockTruncation,
) -> Result<SparseOperator> {
    check_params(params)?;
    if shape.qubits_per_site != 1 {
        return Err(Error::InvalidParameter(
            "effective model expects one qubit per cavity".into(),
        ));
    }
    let basis = Basis::bosonic(shape.sites, trunc);
    let site = effective_site(params, trunc.n_max, true);
    assemble(
        &basis,
        &site,
        &shape.bonds(),
        params.hopping / params.omega_q,
        DEFAULT_DIM_LIMIT,
    )
}

/// Diagonal `(-1)^{sum_j (q_j + n_j)}` on the Rabi basis of `shape`.
pub fn parity_operator(shape: &SystemShape, trunc: FockTruncation) -> SparseOperator {
    SparseOperator::diagonal_matrix(&Basis::for_shape(shape, trunc).parity_signs())
}

/// Which operator family a [`HamiltonianSpec`] assembles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HamiltonianKind {
    /// Rabi/Dicke cavities with qubits, energies in bare units.
    Full,
    /// Lower qubit branch of the effective model, energies in units of `omega_q`.
    Effective,
    /// Cavities without qubits, energies in bare units.
    Quadratic,
}

/// Everything except the cutoff needed to assemble one Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HamiltonianSpec {
    pub kind: HamiltonianKind,
    pub params: ModelParams,
    pub shape: SystemShape,
}

impl HamiltonianSpec {
    pub fn full(params: ModelParams, shape: SystemShape) -> Self {
        Self {
            kind: HamiltonianKind::Full,
            params,
            shape,
        }
    }

    pub fn effective(params: ModelParams, shape: SystemShape) -> Self {
        Self {
            kind: HamiltonianKind::Effective,
            params,
            shape,
        }
    }

    pub fn quadratic(params: ModelParams) -> Self {
        Self {
            kind: HamiltonianKind::Quadratic,
            params,
            shape: SystemShape::dimer(),
        }
    }

    pub fn basis(&self, trunc: FockTruncation) -> Basis {
        match self.kind {
            HamiltonianKind::Full => Basis::for_shape(&self.shape, trunc),
            HamiltonianKind::Effective | HamiltonianKind::Quadratic => {
                Basis::bosonic(self.shape.sites, trunc)
            }
        }
    }

    pub fn build(&self, trunc: FockTruncation) -> Result<SparseOperator> {
        match self.kind {
            HamiltonianKind::Full if self.shape.qubits_per_site == 1 => {
                build_chain(&self.params, &self.shape, trunc)
            }
            HamiltonianKind::Full => build_dicke_dimer(&self.params, &self.shape, trunc),
            HamiltonianKind::Effective => {
                build_effective_lower_branch(&self.params, &self.shape, trunc)
            }
            HamiltonianKind::Quadratic => build_quadratic(&self.params, trunc),
        }
    }

    /// Energy unit of the assembled matrix, in bare units.
    pub fn energy_unit(&self) -> f64 {
        match self.kind {
            HamiltonianKind::Effective => self.params.omega_q,
            _ => 1.0,
        }
    }

    /// Frequency ratio that sets the quadrature normalisation, `N eta`.
    pub fn eta_eff(&self) -> f64 {
        match self.kind {
            HamiltonianKind::Quadratic => self.params.eta(),
            _ => self.params.eta() * self.shape.qubits_per_site as f64,
        }
    }

    /// True when every bosonic normal mode has a non-negative frequency².
    pub fn is_stable(&self) -> bool {
        let boundary = if self.shape.sites >= 3 {
            self.shape.boundary
        } else {
            Boundary::Open
        };
        bosonic_stability_margin(&self.params, self.shape.sites, boundary) >= 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::from_dimensionless;
    use proptest::prelude::*;

    fn trunc(n: usize) -> FockTruncation {
        FockTruncation::new(n).unwrap()
    }

    fn st(spin: usize, bosons: usize) -> SiteState {
        SiteState { spin, bosons }
    }

    fn sample_params() -> ModelParams {
        ModelParams::new(1.0, 3.0, 0.7, 0.2, 0.3).unwrap()
    }

    #[test]
    fn qrd_dimension_and_vacuum_elements() {
        let p = sample_params();
        let h = build_qrd(&p, trunc(3)).unwrap();
        assert_eq!(h.dim(), 64);
        assert!(h.is_hermitian());
        let b = Basis::for_shape(&SystemShape::dimer(), trunc(3));
        let vac = b.index(&[st(0, 0), st(0, 0)]);
        assert!((h.get(vac, vac) - (-p.omega_q + 2.0 * p.a2_amplitude)).abs() < 1e-14);
        let flip = b.index(&[st(1, 1), st(0, 0)]);
        assert!((h.get(flip, vac) - p.coupling).abs() < 1e-14);
        let pair = b.index(&[st(0, 1), st(0, 1)]);
        assert!((h.get(pair, vac) - p.hopping).abs() < 1e-14);
    }

    #[test]
    fn quadratic_elements() {
        let free = build_quadratic(
            &ModelParams::new(1.0, 1.0, 0.0, 0.0, 0.0).unwrap(),
            trunc(4),
        )
        .unwrap();
        let b = Basis::bosonic(2, trunc(4));
        for (i, s) in (0..b.dim()).map(|i| (i, b.decode(i))) {
            assert_eq!(free.get(i, i), (s[0].bosons + s[1].bosons) as f64);
            assert_eq!(free.row(i).count(), usize::from(i != 0));
        }
        let p = ModelParams::new(1.0, 1.0, 0.0, 0.25, 0.25).unwrap();
        let h = build_quadratic(&p, trunc(4)).unwrap();
        let vac = b.index(&[st(0, 0), st(0, 0)]);
        assert!((h.get(b.index(&[st(0, 2), st(0, 0)]), vac) - 2f64.sqrt() * 0.25).abs() < 1e-15);
        assert!((h.get(b.index(&[st(0, 1), st(0, 1)]), vac) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn dicke_reduces_to_rabi() {
        let p = sample_params();
        let rabi = build_qrd(&p, trunc(5)).unwrap();
        let dicke = build_dicke_dimer(&p, &SystemShape::dicke_dimer(1).unwrap(), trunc(5)).unwrap();
        assert_eq!(rabi, dicke);
    }

    #[test]
    fn dicke_dimension_and_ladder_element() {
        let p = sample_params();
        let shape = SystemShape::dicke_dimer(2).unwrap();
        assert_eq!(build_dicke_dimer(&p, &shape, trunc(2)).unwrap().dim(), 81);

        // Brute-force S+ for j = 2 from the spin-1/2 product basis of 4 qubits:
        // |m=-2> -> |m=-1> has amplitude sqrt(4) in the unnormalised sum, and
        // the symmetric |m=-1> carries 1/sqrt(4), leaving sqrt(N) = 2.
        let n = 4usize;
        let shape = SystemShape::dicke_dimer(n).unwrap();
        let h = build_dicke_dimer(&p, &shape, trunc(2)).unwrap();
        let b = Basis::for_shape(&shape, trunc(2));
        let ladder_up = 2.0; // <m=-1|S+|m=-2>
        let expected = p.coupling * (2.0 / (n as f64).sqrt()) * ladder_up / 2.0;
        let from = b.index(&[st(0, 0), st(0, 0)]);
        let to = b.index(&[st(1, 1), st(0, 0)]);
        assert!((h.get(to, from) - expected).abs() < 1e-14);
        assert!((expected - p.coupling).abs() < 1e-14);
    }

    #[test]
    fn chain_nesting_and_wrap() {
        let p = sample_params();
        let open2 = build_chain(
            &p,
            &SystemShape::chain(2, Boundary::Open).unwrap(),
            trunc(4),
        )
        .unwrap();
        assert_eq!(open2, build_qrd(&p, trunc(4)).unwrap());

        let shape = SystemShape::chain(3, Boundary::Periodic).unwrap();
        let h = build_chain(&p, &shape, trunc(2)).unwrap();
        let b = Basis::for_shape(&shape, trunc(2));
        let vac = b.index(&[st(0, 0); 3]);
        let wrap = b.index(&[st(0, 1), st(0, 0), st(0, 1)]);
        assert!((h.get(wrap, vac) - p.hopping).abs() < 1e-15);
        let open = build_chain(
            &p,
            &SystemShape::chain(3, Boundary::Open).unwrap(),
            trunc(2),
        )
        .unwrap();
        assert_eq!(open.get(wrap, vac), 0.0);
    }

    #[test]
    fn chain_dimension_count() {
        let p = sample_params();
        let shape = SystemShape::chain(3, Boundary::Open).unwrap();
        assert_eq!(Basis::for_shape(&shape, trunc(10)).dim(), 10648);
        let big = SystemShape::chain(8, Boundary::Open).unwrap();
        assert!(matches!(
            build_chain(&p, &big, trunc(10)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn effective_quartic_element() {
        let p = from_dimensionless(0.8, 0.5, 0.5, 16.0).unwrap();
        let h = build_effective_dimer(&p, trunc(6)).unwrap();
        assert!(h.is_hermitian());
        let b = Basis::for_shape(&SystemShape::dimer(), trunc(6));
        let from = b.index(&[st(0, 0), st(0, 0)]);
        let to = b.index(&[st(0, 4), st(0, 0)]);
        // Only the quartic term reaches n = 4 from the vacuum.
        let g4 = 0.8f64.powi(4) / (16.0 * 16.0 * 16.0);
        assert!((h.get(to, from) - g4 * 24f64.sqrt()).abs() < 1e-15);
        let up = b.index(&[st(1, 4), st(0, 0)]);
        assert!((h.get(up, b.index(&[st(1, 0), st(0, 0)])) + g4 * 24f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn effective_without_coupling() {
        let p = ModelParams::new(1.0, 8.0, 0.0, 0.3, 0.2).unwrap();
        let h = build_effective_dimer(&p, trunc(4)).unwrap();
        let b = Basis::for_shape(&SystemShape::dimer(), trunc(4));
        let vac = b.index(&[st(0, 0), st(0, 0)]);
        assert!((h.get(vac, vac) - (-1.0 + 2.0 * 0.3 / 8.0)).abs() < 1e-15);
        let two = b.index(&[st(0, 2), st(0, 0)]);
        assert!((h.get(two, vac) - 2f64.sqrt() * 0.3 / 8.0).abs() < 1e-15);
        let pair = b.index(&[st(0, 1), st(0, 1)]);
        assert!((h.get(pair, vac) - 0.2 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn lower_branch_is_a_block_of_the_effective_model() {
        let p = from_dimensionless(0.9, 0.4, 0.3, 20.0).unwrap();
        let full = build_effective_dimer(&p, trunc(5)).unwrap();
        let lower = build_effective_lower_branch(&p, &SystemShape::dimer(), trunc(5)).unwrap();
        let bf = Basis::for_shape(&SystemShape::dimer(), trunc(5));
        let bl = Basis::bosonic(2, trunc(5));
        for (r, c, v) in lower.triplets() {
            let map = |i: usize| {
                let s = bl.decode(i);
                bf.index(&[st(0, s[0].bosons), st(0, s[1].bosons)])
            };
            assert_eq!(full.get(map(r), map(c)), v);
        }
    }

    #[test]
    fn parity_signs_of_named_states() {
        let shape = SystemShape::dimer();
        let p = parity_operator(&shape, trunc(2));
        let b = Basis::for_shape(&shape, trunc(2));
        assert_eq!(p.get(0, 0), 1.0);
        let i = b.index(&[st(1, 0), st(0, 0)]);
        assert_eq!(p.get(i, i), -1.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn every_builder_commutes_with_parity(
            g in -2.0f64..2.0, d in -1.0f64..1.0, j in -1.0f64..1.0,
            wq in 0.2f64..5.0, n in 1usize..5, qubits in 1usize..4,
        ) {
            let p = ModelParams::new(1.0, wq, g, d, j).unwrap();
            let t = trunc(n);
            let dimer = SystemShape::dimer();
            let signs = Basis::for_shape(&dimer, t).parity_signs();
            for h in [build_qrd(&p, t).unwrap(), build_effective_dimer(&p, t).unwrap()] {
                prop_assert!(h.is_hermitian());
                prop_assert_eq!(h.commutator_with_diagonal(&signs), 0.0);
            }
            let q = build_quadratic(&p, t).unwrap();
            prop_assert!(q.is_hermitian());
            prop_assert_eq!(q.commutator_with_diagonal(&Basis::bosonic(2, t).parity_signs()), 0.0);

            let dicke = SystemShape::dicke_dimer(qubits).unwrap();
            let h = build_dicke_dimer(&p, &dicke, t).unwrap();
            prop_assert!(h.is_hermitian());
            prop_assert_eq!(h.commutator_with_diagonal(&Basis::for_shape(&dicke, t).parity_signs()), 0.0);

            for boundary in [Boundary::Open, Boundary::Periodic] {
                let chain = SystemShape::chain(3, boundary).unwrap();
                let t2 = trunc(n.min(2));
                let h = build_chain(&p, &chain, t2).unwrap();
                prop_assert!(h.is_hermitian());
                prop_assert_eq!(h.commutator_with_diagonal(&parity_operator(&chain, t2).diagonal()), 0.0);
            }
        }
    }
}
