//! Exact-diagonalisation sweeps over dimensionless dimer parameters.

use rayon::prelude::*;
use serde::Serialize;

use crate::analytics::{critical_coupling, landau_coefficients};
use crate::eigensolver::{converged_ground_state, ConvergenceOptions};
use crate::hamiltonian::HamiltonianSpec;
use crate::model::{from_dimensionless, SystemShape};
use crate::observables::{bare_quadrature_moment, photon_number, quadrature_moment, Mode};
use crate::scaling::{collapse_transform, coupling_for_v, RawMoment, ScalingPoint};
use crate::{Error, Result};

/// Which Hamiltonian the dimer sweeps diagonalise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DimerModel {
    Full,
    /// Lower qubit branch of the fourth-order effective Hamiltonian.
    Effective,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointOptions {
    pub model: DimerModel,
    /// Qubits per cavity; values above one select the Dicke dimer.
    pub qubits: usize,
    pub convergence: ConvergenceOptions,
}

impl Default for PointOptions {
    fn default() -> Self {
        Self {
            model: DimerModel::Full,
            qubits: 1,
            convergence: ConvergenceOptions::default(),
        }
    }
}

/// Converged ground-state observables at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimerPoint {
    pub g_tilde: f64,
    pub j_tilde: f64,
    pub d_tilde: f64,
    /// Frequency ratio of a single qubit.
    pub eta: f64,
    /// `N eta`, the ratio that sets the quadrature scale.
    pub eta_eff: f64,
    /// Ground energy per qubit in units of `omega_q`.
    pub energy: f64,
    pub parity: i32,
    /// `<x-²>`
    pub x_minus_sq: f64,
    /// `<(a- + a-†)²>`
    pub x_minus_sq_bare: f64,
    /// `<x+²>`
    pub x_plus_sq: f64,
    /// `<x-²>, <x-⁴>, <x-⁶>`
    pub x_minus_moments: [f64; 3],
    pub photons: [f64; 2],
    pub n_max: usize,
    pub residual: f64,
}

fn spec_for(g: f64, j: f64, d: f64, eta_eff: f64, opts: &PointOptions) -> Result<HamiltonianSpec> {
    if opts.qubits == 0 {
        return Err(Error::InvalidParameter(
            "at least one qubit per cavity".into(),
        ));
    }
    let eta = eta_eff / opts.qubits as f64;
    let params = from_dimensionless(g, j, d, eta)?;
    let shape = SystemShape::dicke_dimer(opts.qubits)?;
    Ok(match opts.model {
        DimerModel::Full => HamiltonianSpec::full(params, shape),
        DimerModel::Effective if opts.qubits == 1 => HamiltonianSpec::effective(params, shape),
        DimerModel::Effective => {
            return Err(Error::InvalidParameter(
                "the effective model is only available for one qubit per cavity".into(),
            ))
        }
    })
}

/// Solve one dimer point at fixed `N eta`.
pub fn solve_dimer_point(
    g_tilde: f64,
    j_tilde: f64,
    d_tilde: f64,
    eta_eff: f64,
    opts: &PointOptions,
) -> Result<DimerPoint> {
    let spec = spec_for(g_tilde, j_tilde, d_tilde, eta_eff, opts)?;
    let c = converged_ground_state(&spec, &opts.convergence)?;
    let s = &c.state;
    let per_qubit = spec.params.omega_q * opts.qubits as f64 / spec.energy_unit();
    Ok(DimerPoint {
        g_tilde,
        j_tilde,
        d_tilde,
        eta: spec.params.eta(),
        eta_eff,
        energy: s.energy / per_qubit,
        parity: s.parity,
        x_minus_sq: quadrature_moment(s, Mode::Minus, 2)?,
        x_minus_sq_bare: bare_quadrature_moment(s, Mode::Minus, 2)?,
        x_plus_sq: quadrature_moment(s, Mode::Plus, 2)?,
        x_minus_moments: [
            quadrature_moment(s, Mode::Minus, 2)?,
            quadrature_moment(s, Mode::Minus, 4)?,
            quadrature_moment(s, Mode::Minus, 6)?,
        ],
        photons: [photon_number(s, 0)?, photon_number(s, 1)?],
        n_max: c.n_max,
        residual: c.residual,
    })
}

/// Solve many points, keeping input order. The first error in input order is
/// returned together with its index.
pub fn solve_many(points: &[(f64, f64, f64, f64)], opts: &PointOptions) -> Vec<Result<DimerPoint>> {
    points
        .par_iter()
        .map(|&(g, j, d, eta)| solve_dimer_point(g, j, d, eta, opts))
        .collect()
}

/// One collapsed `<x-²>` value with the solve behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingSample {
    pub point: ScalingPoint,
    pub solve: DimerPoint,
}

/// `<x-²>` at the couplings that realise each requested `v`, transformed
/// to scaling form.
pub fn scaling_curve(
    j_tilde: f64,
    d_tilde: f64,
    eta_eff: f64,
    vs: &[f64],
    opts: &PointOptions,
) -> Result<Vec<ScalingSample>> {
    let points = vs
        .iter()
        .map(|&v| {
            Ok((
                coupling_for_v(v, j_tilde, d_tilde, eta_eff)?,
                j_tilde,
                d_tilde,
                eta_eff,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    solve_many(&points, opts)
        .into_iter()
        .map(|r| {
            let solve = r?;
            let point = collapse_transform(&RawMoment {
                eta: eta_eff,
                g_tilde: solve.g_tilde,
                j_tilde,
                d_tilde,
                n: 1,
                value: solve.x_minus_sq,
            })?;
            Ok(ScalingSample { point, solve })
        })
        .collect()
}

/// Ground energy turned into the universal form
/// `(E + 1 + 1/eta - sqrt(2 lambda+)/(2 eta)) eta^{4/3} g~_c^{-4/3}`,
/// which removes the Gaussian normal-ordering and `x+` zero-point shifts.
pub fn scaled_ground_energy(point: &DimerPoint) -> Result<f64> {
    let g_c = critical_coupling(point.j_tilde, point.d_tilde).ok_or(Error::NoCriticalPoint {
        j_tilde: point.j_tilde,
        d_tilde: point.d_tilde,
    })?;
    let eta = point.eta_eff;
    let lp = landau_coefficients(point.g_tilde, point.j_tilde, point.d_tilde).lambda_plus;
    let gaussian = -1.0 / eta + (2.0 * lp).sqrt() / (2.0 * eta);
    Ok((point.energy + 1.0 - gaussian) * eta.powf(4.0 / 3.0) * g_c.powf(-4.0 / 3.0))
}

/// Location of the strongest curvature of `E(g~)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvaturePeak {
    /// Parabola-refined position of the largest `|E''|`.
    pub g_peak: f64,
    pub curvature: f64,
    /// False when the largest `|E''|` sits on the edge of the scanned range.
    pub interior: bool,
    /// `(g~, E'')` at the interior grid nodes.
    pub second_derivative: Vec<(f64, f64)>,
}

/// Central second differences of energies on a uniform `g~` grid.
pub fn curvature_peak(gs: &[f64], energies: &[f64]) -> Result<CurvaturePeak> {
    if gs.len() != energies.len() || gs.len() < 5 {
        return Err(Error::InvalidData(
            "curvature scan needs at least 5 matching samples".into(),
        ));
    }
    let h = gs[1] - gs[0];
    if !(h > 0.0)
        || gs
            .windows(2)
            .any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1.0))
    {
        return Err(Error::InvalidData(
            "curvature scan needs a uniform increasing grid".into(),
        ));
    }
    let second: Vec<(f64, f64)> = (1..gs.len() - 1)
        .map(|i| {
            (
                gs[i],
                (energies[i + 1] - 2.0 * energies[i] + energies[i - 1]) / (h * h),
            )
        })
        .collect();
    let (best, _) = second
        .iter()
        .enumerate()
        .map(|(i, &(_, c))| (i, c.abs()))
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, x| if x.1 > acc.1 { x } else { acc },
        );
    let interior = best > 0 && best + 1 < second.len();
    let g_peak = if interior {
        let (a, b, c) = (
            second[best - 1].1.abs(),
            second[best].1.abs(),
            second[best + 1].1.abs(),
        );
        let denom = a - 2.0 * b + c;
        let shift = if denom != 0.0 {
            0.5 * (a - c) / denom
        } else {
            0.0
        };
        second[best].0 + shift.clamp(-1.0, 1.0) * h
    } else {
        second[best].0
    };
    Ok(CurvaturePeak {
        g_peak,
        curvature: second[best].1,
        interior,
        second_derivative: second,
    })
}

/// Ground energies per qubit (units of `omega_q`) along a `g~` grid.
///
/// Only the energy has to settle in the cutoff; deep in the superradiant
/// phase of weakly coupled cavities `<x-²>` is ill-conditioned.
pub fn energy_scan(
    gs: &[f64],
    j_tilde: f64,
    d_tilde: f64,
    eta_eff: f64,
    opts: &PointOptions,
) -> Result<Vec<f64>> {
    let points: Vec<_> = gs.iter().map(|&g| (g, j_tilde, d_tilde, eta_eff)).collect();
    let mut opts = opts.clone();
    opts.convergence.track_order_parameter = false;
    solve_many(&points, &opts)
        .into_iter()
        .map(|r| r.map(|p| p.energy))
        .collect()
}
