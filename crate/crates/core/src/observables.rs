//! Expectation values on ground-state vectors.
//!
//! Quadratures are `x_j = (a_j + a_j†) / sqrt(2 eta)` with `eta` replaced by
//! `N eta` for cavities holding `N` qubits, and `x± = (x_1 ± x_2) / sqrt(2)`.
//! Moments are evaluated by applying the truncated `a + a†` to the vector
//! repeatedly, never by forming matrix powers.

use rayon::prelude::*;
use serde::Serialize;

use crate::hamiltonian::{Basis, HamiltonianSpec};
use crate::model::{FockTruncation, ModelParams, SystemShape};
use crate::sparse::{dot, norm};
use crate::{Error, Result};

const APPLY_CHUNK: usize = 4096;

/// A normalised eigenvector together with the model it belongs to.
#[derive(Debug, Clone, Serialize)]
pub struct GroundState {
    #[serde(skip)]
    pub vector: Vec<f64>,
    pub energy: f64,
    /// `+1` or `-1`.
    pub parity: i32,
    pub params: ModelParams,
    pub shape: SystemShape,
    pub trunc: FockTruncation,
    pub basis: Basis,
    /// Quadrature normalisation, `N eta`.
    pub eta_eff: f64,
}

impl GroundState {
    /// Wrap `vector`, normalising it and reading off its parity.
    pub fn new(
        spec: &HamiltonianSpec,
        trunc: FockTruncation,
        mut vector: Vec<f64>,
        energy: f64,
    ) -> Result<Self> {
        let basis = spec.basis(trunc);
        if vector.len() != basis.dim() {
            return Err(Error::InvalidArgument(format!(
                "vector length {} does not match basis dimension {}",
                vector.len(),
                basis.dim()
            )));
        }
        let nrm = norm(&vector);
        if !(nrm > 0.0) {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        vector.iter_mut().for_each(|x| *x /= nrm);
        let p = parity_expectation(&basis, &vector);
        Ok(Self {
            vector,
            energy,
            parity: if p >= 0.0 { 1 } else { -1 },
            params: spec.params,
            shape: spec.shape,
            trunc,
            basis,
            eta_eff: spec.eta_eff(),
        })
    }

    pub fn parity_expectation(&self) -> f64 {
        parity_expectation(&self.basis, &self.vector)
    }
}

pub(crate) fn parity_expectation(basis: &Basis, v: &[f64]) -> f64 {
    basis
        .parity_signs()
        .iter()
        .zip(v)
        .map(|(s, x)| s * x * x)
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    /// `(x_1 - x_2)/sqrt(2)`
    Minus,
    /// `(x_1 + x_2)/sqrt(2)`
    Plus,
    /// Single cavity, zero-based.
    Site(usize),
}

/// `w = (a + a†) v` on one cavity.
fn apply_site_quadrature(basis: &Basis, site: usize, v: &[f64], coef: f64, w: &mut [f64]) {
    let stride = basis.stride(site);
    let n_max = basis.boson_dim() - 1;
    w.par_chunks_mut(APPLY_CHUNK)
        .enumerate()
        .for_each(|(chunk, out)| {
            let base = chunk * APPLY_CHUNK;
            for (k, wi) in out.iter_mut().enumerate() {
                let i = base + k;
                let n = basis.site_state(i, site).bosons;
                let mut acc = 0.0;
                if n > 0 {
                    acc += (n as f64).sqrt() * v[i - stride];
                }
                if n < n_max {
                    acc += ((n + 1) as f64).sqrt() * v[i + stride];
                }
                *wi += coef * acc;
            }
        });
}

fn apply_mode(basis: &Basis, mode: Mode, v: &[f64]) -> Vec<f64> {
    let mut w = vec![0.0; v.len()];
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match mode {
        Mode::Site(j) => apply_site_quadrature(basis, j, v, 1.0, &mut w),
        Mode::Minus => {
            apply_site_quadrature(basis, 0, v, r, &mut w);
            apply_site_quadrature(basis, 1, v, -r, &mut w);
        }
        Mode::Plus => {
            apply_site_quadrature(basis, 0, v, r, &mut w);
            apply_site_quadrature(basis, 1, v, r, &mut w);
        }
    }
    w
}

fn check_mode(state: &GroundState, mode: Mode) -> Result<()> {
    match mode {
        Mode::Minus | Mode::Plus if state.shape.sites != 2 => Err(Error::InvalidArgument(format!(
            "{mode:?} mode needs two cavities, got {}",
            state.shape.sites
        ))),
        Mode::Site(j) if j >= state.shape.sites => Err(Error::InvalidArgument(format!(
            "site {j} out of range for {} cavities",
            state.shape.sites
        ))),
        _ => Ok(()),
    }
}

/// `<(a_mode + a_mode†)^power>` for any power `>= 1`.
pub fn bare_quadrature_expectation(state: &GroundState, mode: Mode, power: u32) -> Result<f64> {
    check_mode(state, mode)?;
    if power == 0 {
        return Err(Error::InvalidArgument("power must be positive".into()));
    }
    let half = power / 2;
    let mut left = state.vector.clone();
    for _ in 0..half {
        left = apply_mode(&state.basis, mode, &left);
    }
    if power % 2 == 0 {
        Ok(dot(&left, &left))
    } else {
        let right = apply_mode(&state.basis, mode, &left);
        Ok(dot(&left, &right))
    }
}

/// `<x_mode^power>` for any power `>= 1`.
pub fn quadrature_expectation(state: &GroundState, mode: Mode, power: u32) -> Result<f64> {
    let bare = bare_quadrature_expectation(state, mode, power)?;
    Ok(bare / (2.0 * state.eta_eff).powf(power as f64 / 2.0))
}

fn check_even(power: u32) -> Result<()> {
    if power == 0 || power % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "moment power must be a positive even integer, got {power}"
        )));
    }
    Ok(())
}

/// `<x_mode^power>` for even `power`.
pub fn quadrature_moment(state: &GroundState, mode: Mode, power: u32) -> Result<f64> {
    check_even(power)?;
    quadrature_expectation(state, mode, power)
}

/// `<(a_mode + a_mode†)^power>` for even `power`, equal to
/// `(2 eta)^(power/2)` times [`quadrature_moment`].
pub fn bare_quadrature_moment(state: &GroundState, mode: Mode, power: u32) -> Result<f64> {
    check_even(power)?;
    bare_quadrature_expectation(state, mode, power)
}

/// `<a_j† a_j>`.
pub fn photon_number(state: &GroundState, site: usize) -> Result<f64> {
    check_mode(state, Mode::Site(site))?;
    let b = &state.basis;
    Ok(state
        .vector
        .iter()
        .enumerate()
        .map(|(i, x)| b.site_state(i, site).bosons as f64 * x * x)
        .sum())
}
