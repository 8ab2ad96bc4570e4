//! Closed-form mean-field and Gaussian results.

use std::f64::consts::PI;

use serde::Serialize;

use crate::model::{Boundary, ModelParams};
use crate::{Error, Result};

/// A normal-mode frequency; imaginary when its square is negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Frequency {
    Real(f64),
    /// Stores `sqrt(-eps²)`.
    Imaginary(f64),
}

impl Frequency {
    fn from_square(sq: f64) -> Self {
        if sq >= 0.0 {
            Frequency::Real(sq.sqrt())
        } else {
            Frequency::Imaginary((-sq).sqrt())
        }
    }

    pub fn real(&self) -> Option<f64> {
        match *self {
            Frequency::Real(v) => Some(v),
            Frequency::Imaginary(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BogoliubovSpectrum {
    pub eps_plus: Frequency,
    pub eps_minus: Frequency,
    pub stable: bool,
}

impl BogoliubovSpectrum {
    /// Gaussian ground energy `(eps+ + eps-)/2 - omega_r` of the two-cavity
    /// quadratic model, when both modes are real.
    pub fn ground_energy(&self, omega_r: f64) -> Option<f64> {
        Some((self.eps_plus.real()? + self.eps_minus.real()?) / 2.0 - omega_r)
    }
}

/// Normal modes of `omega_r a†a + D (a + a†)²` per cavity with hopping `J`.
pub fn bogoliubov_frequencies(omega_r: f64, d: f64, j: f64) -> BogoliubovSpectrum {
    let plus = omega_r * (omega_r + 4.0 * d + 2.0 * j);
    let minus = omega_r * (omega_r + 4.0 * d - 2.0 * j);
    BogoliubovSpectrum {
        eps_plus: Frequency::from_square(plus),
        eps_minus: Frequency::from_square(minus),
        stable: plus >= 0.0 && minus >= 0.0,
    }
}

/// Smallest `omega_r + 4D + 4J cos k` over the bosonic normal modes of
/// `sites` cavities. Negative values mean the quadratic part is unbounded.
pub fn bosonic_stability_margin(params: &ModelParams, sites: usize, boundary: Boundary) -> f64 {
    let base = params.omega_r + 4.0 * params.a2_amplitude;
    if sites < 2 {
        return base;
    }
    let boundary = if sites < 3 { Boundary::Open } else { boundary };
    quasimomenta(sites, boundary)
        .into_iter()
        .map(|k| base + 4.0 * params.hopping * k.cos())
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LandauCoefficients {
    pub lambda_s: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    /// Quartic coefficient of the minus mode.
    pub quartic: f64,
}

/// Quadratic coefficients of the mean-field energy in `x+` and `x-`.
pub fn landau_coefficients(g_tilde: f64, j_tilde: f64, d_tilde: f64) -> LandauCoefficients {
    let g2 = g_tilde * g_tilde;
    let lambda_s = (g2 * (d_tilde - 1.0) + 1.0) / 2.0;
    let half = j_tilde.abs() / 2.0;
    LandauCoefficients {
        lambda_s,
        lambda_plus: lambda_s + half,
        lambda_minus: lambda_s - half,
        quartic: g2 * g2 / 8.0,
    }
}

/// `sqrt((1 - |J~|)/(1 - D~))` when that radicand is positive and finite.
pub fn critical_coupling(j_tilde: f64, d_tilde: f64) -> Option<f64> {
    let r = (1.0 - j_tilde.abs()) / (1.0 - d_tilde);
    (r.is_finite() && r > 0.0).then(|| r.sqrt())
}

/// Bounds on `|J~|` for the superradiant phase: `lower < |J~| <= upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuperradianceWindow {
    pub lower: f64,
    pub upper: f64,
}

impl SuperradianceWindow {
    pub fn contains(&self, j_tilde: f64) -> bool {
        let j = j_tilde.abs();
        self.lower < j && j <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

pub fn superradiance_window(g_tilde: f64, d_tilde: f64) -> SuperradianceWindow {
    let g2 = g_tilde * g_tilde;
    SuperradianceWindow {
        lower: (d_tilde - 1.0) * g2 + 1.0,
        upper: d_tilde * g2 + 1.0,
    }
}

/// Mean-field order parameter `2 sqrt(-lambda_-) / g~²`, zero when
/// `lambda_- >= 0`.
pub fn mean_field_order_parameter(g_tilde: f64, j_tilde: f64, d_tilde: f64) -> Result<f64> {
    let lm = landau_coefficients(g_tilde, j_tilde, d_tilde).lambda_minus;
    if lm >= 0.0 {
        return Ok(0.0);
    }
    if g_tilde == 0.0 {
        return Err(Error::SingularOrderParameter);
    }
    Ok(2.0 * (-lm).sqrt() / (g_tilde * g_tilde))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Phase {
    Normal,
    Superradiant,
    Unstable,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Normal => "normal",
            Phase::Superradiant => "superradiant",
            Phase::Unstable => "unstable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint {
    pub classification: Phase,
    pub order_parameter_mf: f64,
    pub lambda_minus: f64,
    pub g_c: Option<f64>,
}

pub fn classify(g_tilde: f64, j_tilde: f64, d_tilde: f64) -> PhasePoint {
    let lambda_minus = landau_coefficients(g_tilde, j_tilde, d_tilde).lambda_minus;
    let g_c = critical_coupling(j_tilde, d_tilde);
    let unstable = j_tilde.abs() > 1.0 + d_tilde * g_tilde * g_tilde;
    let (classification, order) = if unstable {
        (Phase::Unstable, 0.0)
    } else if lambda_minus < 0.0 {
        (
            Phase::Superradiant,
            mean_field_order_parameter(g_tilde, j_tilde, d_tilde).unwrap_or(f64::INFINITY),
        )
    } else {
        (Phase::Normal, 0.0)
    };
    PhasePoint {
        classification,
        order_parameter_mf: order,
        lambda_minus,
        g_c,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainModes {
    pub sites: usize,
    pub boundary: Boundary,
    pub quasimomenta: Vec<f64>,
    pub lambdas: Vec<f64>,
    /// `2 (lambda_s - min lambda)`, the dimer-equivalent hopping.
    pub j_eff: f64,
    pub min_lambda: f64,
}

fn quasimomenta(sites: usize, boundary: Boundary) -> Vec<f64> {
    let l = sites as f64;
    (1..=sites)
        .map(|j| {
            let j = j as f64;
            match boundary {
                Boundary::Open => j * PI / (l + 1.0),
                Boundary::Periodic if sites % 2 == 0 => -PI + 2.0 * (j - 1.0) * PI / l,
                Boundary::Periodic => -PI + (2.0 * j - 1.0) * PI / l,
            }
        })
        .collect()
}

/// Landau coefficients of the `L` normal modes of a cavity chain.
pub fn chain_modes(
    g_tilde: f64,
    j_tilde: f64,
    d_tilde: f64,
    sites: usize,
    boundary: Boundary,
) -> Result<ChainModes> {
    let min_sites = match boundary {
        Boundary::Open => 2,
        Boundary::Periodic => 3,
    };
    if sites < min_sites {
        return Err(Error::InvalidParameter(format!(
            "{boundary:?} chain needs at least {min_sites} cavities, got {sites}"
        )));
    }
    let lambda_s = landau_coefficients(g_tilde, j_tilde, d_tilde).lambda_s;
    let quasimomenta = quasimomenta(sites, boundary);
    let lambdas: Vec<f64> = quasimomenta
        .iter()
        .map(|k| lambda_s + j_tilde * k.cos())
        .collect();
    let min_lambda = lambdas.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ChainModes {
        sites,
        boundary,
        quasimomenta,
        lambdas,
        j_eff: 2.0 * (lambda_s - min_lambda),
        min_lambda,
    })
}
