//! Finite-frequency scaling: scaling variables, collapse, power-law fits and
//! a finite-difference solver for the universal quartic oscillator
//!
//! ```text
//! (-1/2 d²/du² - v u² + u⁴/8) phi = E0(v) phi
//! ```

use serde::Serialize;

use crate::analytics::critical_coupling;
use crate::model::ReducedCouplings;
use crate::{Error, Result};

/// Critical exponents of the transition, consumed as constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingExponents;

impl ScalingExponents {
    pub const NU: f64 = 1.5;
    pub const INV_NU: f64 = 2.0 / 3.0;
    pub const NU_KAPPA: f64 = 3.0;
    pub const ALPHA_Q: f64 = 1.0;

    /// `beta_Q` of the observable `x-^{2n}`.
    pub fn beta_q(n: u32) -> f64 {
        n as f64
    }

    /// Exponent of `eta` that removes the leading size dependence of
    /// `x-^{2n}`, i.e. `beta_Q / nu = 2n/3`.
    pub fn eta_exponent(n: u32) -> f64 {
        Self::beta_q(n) / Self::NU
    }
}

/// `sign(x) |x|^p`.
pub fn signed_pow(x: f64, p: f64) -> f64 {
    x.signum() * x.abs().powf(p)
}

fn check_defined(t: &ReducedCouplings) -> Result<()> {
    if t.t_d == 0.0 || t.t_j == 0.0 {
        return Err(Error::UndefinedScalingVariable);
    }
    Ok(())
}

/// `t_g t_D^{4/3} t_J^{-1/3} eta^{2/3}` with signed fractional powers.
pub fn scaling_variable_v(t: &ReducedCouplings, eta: f64) -> Result<f64> {
    check_defined(t)?;
    Ok(t.t_g * signed_pow(t.t_d, 4.0 / 3.0) * signed_pow(t.t_j, -1.0 / 3.0) * eta.powf(2.0 / 3.0))
}

/// Scaling variable oriented so that `v > 0` is always the superradiant side:
/// `-t_g t_D |t_D / t_J|^{1/3} eta^{2/3}`.
///
/// Equal to [`scaling_variable_v`] when `t_D < 0` and its negative when
/// `t_D > 0`, where the transition is reversed.
pub fn oriented_scaling_variable(t: &ReducedCouplings, eta: f64) -> Result<f64> {
    check_defined(t)?;
    Ok(-t.t_g * t.t_d * (t.t_d / t.t_j).abs().cbrt() * eta.powf(2.0 / 3.0))
}

/// Coupling `g~` at which [`oriented_scaling_variable`] equals `v`.
pub fn coupling_for_v(v: f64, j_tilde: f64, d_tilde: f64, eta: f64) -> Result<f64> {
    let g_c =
        critical_coupling(j_tilde, d_tilde).ok_or(Error::NoCriticalPoint { j_tilde, d_tilde })?;
    let t_d = d_tilde - 1.0;
    let t_j = j_tilde.abs() - 1.0;
    let t_g = -v / (t_d * (t_d / t_j).abs().cbrt() * eta.powf(2.0 / 3.0));
    let g = g_c * (1.0 + t_g);
    if g < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "v = {v} needs a negative coupling at eta = {eta}"
        )));
    }
    Ok(g)
}

/// A measured `<x-^{2n}>` with the parameters it was taken at.
///
/// For Dicke cavities `eta` is the effective ratio `N eta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RawMoment {
    pub eta: f64,
    pub g_tilde: f64,
    pub j_tilde: f64,
    pub d_tilde: f64,
    pub n: u32,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingPoint {
    /// Oriented scaling variable.
    pub v: f64,
    pub scaled_value: f64,
    pub raw: RawMoment,
}

/// `(v, <x-^{2n}> eta^{2n/3} g~_c^{4n/3})`.
pub fn collapse_transform(raw: &RawMoment) -> Result<ScalingPoint> {
    let g_c = critical_coupling(raw.j_tilde, raw.d_tilde).ok_or(Error::NoCriticalPoint {
        j_tilde: raw.j_tilde,
        d_tilde: raw.d_tilde,
    })?;
    let t = ReducedCouplings::from_dimensionless(raw.g_tilde, raw.j_tilde.abs(), raw.d_tilde)?;
    let n = raw.n as f64;
    Ok(ScalingPoint {
        v: oriented_scaling_variable(&t, raw.eta)?,
        scaled_value: raw.value
            * raw.eta.powf(ScalingExponents::eta_exponent(raw.n))
            * g_c.powf(4.0 * n / 3.0),
        raw: *raw,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest `|ln y - (intercept + slope ln x)|`.
    pub max_residual: f64,
}

/// Least-squares line through `(ln x, ln y)`.
pub fn loglog_fit(points: &[(f64, f64)]) -> Result<LogLogFit> {
    if points.len() < 3 {
        return Err(Error::InvalidData(format!(
            "log-log fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(x, y)) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::InvalidData(format!(
            "log-log fit needs positive data, got ({x}, {y})"
        )));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidData(
            "log-log fit needs distinct x values".into(),
        ));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = logs
        .iter()
        .map(|(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    Ok(LogLogFit {
        slope,
        intercept,
        max_residual,
    })
}

/// Uniform grid on `[-u_max, u_max]`; `points` counts both wall nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub u_max: f64,
    pub points: usize,
}

impl GridSpec {
    /// `u_max = max(8, 3 sqrt(4|v| + 1))` with 2001 points.
    pub fn for_v(v: f64) -> Self {
        Self {
            u_max: 8f64.max(3.0 * (4.0 * v.abs() + 1.0).sqrt()),
            points: 2001,
        }
    }

    fn refined(&self) -> Self {
        Self {
            u_max: self.u_max,
            points: 2 * self.points - 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniversalSolution {
    pub v: f64,
    /// `E0(v)` after Richardson extrapolation.
    pub energy: f64,
    /// `<u^2>, <u^4>, <u^6>` after Richardson extrapolation.
    pub moments: Vec<f64>,
    pub grid: GridSpec,
    /// Change of the energy under the refinement step, relative to `max(1, |E0|)`.
    pub refinement_change: f64,
    pub grid_converged: bool,
}

impl UniversalSolution {
    /// `<u^{2n}>` for `n` in `1..=3`.
    pub fn moment(&self, n: usize) -> f64 {
        self.moments[n - 1]
    }
}

const MOMENTS: usize = 3;
const WALL_POINTS: usize = 5;
const WALL_MASS_LIMIT: f64 = 1e-8;

struct GridSolve {
    energy: f64,
    moments: [f64; MOMENTS],
    wall_mass: f64,
}

/// Lowest eigenvalue of a symmetric tridiagonal matrix by Sturm bisection.
fn lowest_tridiagonal_eigenvalue(diag: &[f64], off: &[f64]) -> f64 {
    let count_below = |x: f64| -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..diag.len() {
            let coupling = if i == 0 {
                0.0
            } else {
                off[i - 1] * off[i - 1] / q
            };
            q = diag[i] - x - coupling;
            if q == 0.0 {
                q = -f64::EPSILON * (diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let radius = |i: usize| {
        let l = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let r = if i < off.len() { off[i].abs() } else { 0.0 };
        l + r
    };
    let mut lo = (0..diag.len())
        .map(|i| diag[i] - radius(i))
        .fold(f64::INFINITY, f64::min);
    let mut hi = (0..diag.len())
        .map(|i| diag[i] + radius(i))
        .fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Solve `(T - sigma) y = x` for symmetric tridiagonal `T` (Thomas algorithm).
fn thomas(diag: &[f64], off: &[f64], sigma: f64, rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = diag[0] - sigma;
    c[0] = if n > 1 { off[0] / denom } else { 0.0 };
    d[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - sigma - off[i - 1] * c[i - 1];
        if i + 1 < n {
            c[i] = off[i] / denom;
        }
        d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / denom;
    }
    let mut y = vec![0.0; n];
    y[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        y[i] = d[i] - c[i] * y[i + 1];
    }
    y
}

/// Even-parity ground state on one grid. Node `0` of the half grid is
/// `u = 0`; the last interior node sits next to the wall.
fn solve_grid(v: f64, grid: GridSpec) -> GridSolve {
    let h = 2.0 * grid.u_max / (grid.points - 1) as f64;
    let half = (grid.points - 1) / 2; // interior nodes with u >= 0
    let u: Vec<f64> = (0..half).map(|i| i as f64 * h).collect();
    let kinetic = 1.0 / (h * h);
    let hop = -0.5 / (h * h);
    let diag: Vec<f64> = u
        .iter()
        .map(|&x| kinetic - v * x * x + x.powi(4) / 8.0)
        .collect();
    // Even sector, symmetrised by rescaling the centre amplitude by 1/sqrt(2).
    let mut off = vec![hop; half - 1];
    off[0] = std::f64::consts::SQRT_2 * hop;

    let lambda = lowest_tridiagonal_eigenvalue(&diag, &off);
    let shift = lambda - 1e-10 * lambda.abs().max(1.0);
    let mut phi = vec![1.0; half];
    for _ in 0..4 {
        phi = thomas(&diag, &off, shift, &phi);
        let n = phi.iter().map(|x| x * x).sum::<f64>().sqrt();
        phi.iter_mut().for_each(|x| *x /= n);
    }
    // Full-grid weights: centre carries 2 phi_0², each side node phi_i².
    let total: f64 = 2.0 * phi.iter().map(|x| x * x).sum::<f64>();
    let mut moments = [0.0; MOMENTS];
    for (i, (&x, &p)) in u.iter().zip(&phi).enumerate().skip(1) {
        let w = 2.0 * p * p / total;
        let x2 = x * x;
        let mut xp = x2;
        for m in moments.iter_mut() {
            *m += w * xp;
            xp *= x2;
        }
        let _ = i;
    }
    let wall_mass = phi[half - WALL_POINTS.min(half)..]
        .iter()
        .map(|p| p * p / total)
        .sum();
    GridSolve {
        energy: lambda,
        moments,
        wall_mass,
    }
}

/// Lowest eigenpair of the universal equation, with one Richardson step.
pub fn universal_ode_solve(v: f64, grid: GridSpec) -> Result<UniversalSolution> {
    if !v.is_finite() {
        return Err(Error::InvalidArgument("v must be finite".into()));
    }
    if !(grid.u_max > 0.0 && grid.u_max.is_finite()) {
        return Err(Error::InvalidArgument("u_max must be positive".into()));
    }
    if grid.points < 201 || grid.points % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "grid needs an odd number of at least 201 points, got {}",
            grid.points
        )));
    }
    let coarse = solve_grid(v, grid);
    if coarse.wall_mass > WALL_MASS_LIMIT {
        return Err(Error::GridTooSmall {
            wall_mass: coarse.wall_mass,
        });
    }
    let fine = solve_grid(v, grid.refined());
    let extrapolate = |c: f64, f: f64| (4.0 * f - c) / 3.0;
    let energy = extrapolate(coarse.energy, fine.energy);
    let moments = (0..MOMENTS)
        .map(|m| extrapolate(coarse.moments[m], fine.moments[m]))
        .collect();
    let refinement_change = (energy - fine.energy).abs() / energy.abs().max(1.0);
    Ok(UniversalSolution {
        v,
        energy,
        moments,
        grid,
        refinement_change,
        grid_converged: refinement_change < 1e-6,
    })
}

/// `E0(v)` on the default grid.
pub fn universal_ground_energy(v: f64) -> Result<f64> {
    Ok(universal_ode_solve(v, GridSpec::for_v(v))?.energy)
}

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes).
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidData(
                "interpolation needs at least 2 points".into(),
            ));
        }
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pts.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidData(
                "interpolation abscissae must be distinct".into(),
            ));
        }
        let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
        let n = x.len();
        let delta: Vec<f64> = (0..n - 1)
            .map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i]))
            .collect();
        let mut m = vec![0.0; n];
        m[0] = delta[0];
        m[n - 1] = delta[n - 2];
        for i in 1..n - 1 {
            m[i] = if delta[i - 1] * delta[i] <= 0.0 {
                0.0
            } else {
                (delta[i - 1] + delta[i]) / 2.0
            };
        }
        for i in 0..n - 1 {
            if delta[i] == 0.0 {
                m[i] = 0.0;
                m[i + 1] = 0.0;
                continue;
            }
            let a = m[i] / delta[i];
            let b = m[i + 1] / delta[i];
            let s = a * a + b * b;
            if s > 9.0 {
                let t = 3.0 / s.sqrt();
                m[i] = t * a * delta[i];
                m[i + 1] = t * b * delta[i];
            }
        }
        Ok(Self { x, y, slopes: m })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    /// Value at `t`, or `None` outside the data range.
    pub fn eval(&self, t: f64) -> Option<f64> {
        let (lo, hi) = self.domain();
        if !(t >= lo && t <= hi) {
            return None;
        }
        let i = match self.x.partition_point(|&xi| xi <= t) {
            0 => 0,
            k => (k - 1).min(self.x.len() - 2),
        };
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        Some(
            h00 * self.y[i]
                + h10 * h * self.slopes[i]
                + h01 * self.y[i + 1]
                + h11 * h * self.slopes[i + 1],
        )
    }
}

/// Worst pointwise disagreement between several curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollapseSpread {
    /// `max_v (max - min) / |mean|` over curves covering `v`.
    pub max_spread: f64,
    pub at_v: f64,
    /// Grid points at which at least two curves were compared.
    pub compared: usize,
}

pub fn collapse_spread(curves: &[Vec<(f64, f64)>], v_grid: &[f64]) -> Result<CollapseSpread> {
    let interps = curves
        .iter()
        .map(|c| MonotoneCubic::new(c))
        .collect::<Result<Vec<_>>>()?;
    let mut out = CollapseSpread {
        max_spread: 0.0,
        at_v: f64::NAN,
        compared: 0,
    };
    for &v in v_grid {
        let vals: Vec<f64> = interps.iter().filter_map(|c| c.eval(v)).collect();
        if vals.len() < 2 {
            continue;
        }
        out.compared += 1;
        let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let spread = (max - min) / mean.abs();
        if spread > out.max_spread || out.at_v.is_nan() {
            out.max_spread = spread;
            out.at_v = v;
        }
    }
    if out.compared == 0 {
        return Err(Error::InvalidData("curves share no common v range".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exponent_constants() {
        assert_eq!(ScalingExponents::NU, 1.5);
        assert_relative_eq!(ScalingExponents::eta_exponent(1), 2.0 / 3.0);
        assert_relative_eq!(ScalingExponents::eta_exponent(3), 2.0);
        assert_relative_eq!(ScalingExponents::INV_NU, 1.0 / ScalingExponents::NU);
    }

    #[test]
    fn scaling_variable_examples() {
        let t = ReducedCouplings {
            t_g: 0.05,
            t_d: -0.5,
            t_j: -0.5,
        };
        assert_relative_eq!(
            scaling_variable_v(&t, 512.0).unwrap(),
            1.6,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            oriented_scaling_variable(&t, 512.0).unwrap(),
            1.6,
            max_relative = 1e-12
        );
        let t0 = ReducedCouplings { t_g: 0.0, ..t };
        assert_eq!(scaling_variable_v(&t0, 512.0).unwrap(), 0.0);
        let t = ReducedCouplings {
            t_g: 0.05,
            t_d: 0.2,
            t_j: 0.5,
        };
        let want = 0.05 * 0.2f64.powf(4.0 / 3.0) * 0.5f64.powf(-1.0 / 3.0) * 64.0;
        let v = scaling_variable_v(&t, 512.0).unwrap();
        assert_relative_eq!(v, want, max_relative = 1e-12);
        assert!((v - 0.47155).abs() < 1e-5);
        assert_relative_eq!(
            oriented_scaling_variable(&t, 512.0).unwrap(),
            -v,
            max_relative = 1e-12
        );
    }

    #[test]
    fn scaling_variable_undefined() {
        for t in [
            ReducedCouplings {
                t_g: 0.1,
                t_d: 0.0,
                t_j: -0.5,
            },
            ReducedCouplings {
                t_g: 0.1,
                t_d: -0.5,
                t_j: 0.0,
            },
        ] {
            assert!(matches!(
                scaling_variable_v(&t, 8.0),
                Err(Error::UndefinedScalingVariable)
            ));
        }
    }

    #[test]
    fn coupling_inverts_scaling_variable() {
        for (j, d) in [(0.5, 0.5), (0.2, 0.8), (1.5, 1.2)] {
            for v in [-2.0, -0.3, 0.0, 1.7] {
                let g = coupling_for_v(v, j, d, 256.0).unwrap();
                let t = ReducedCouplings::from_dimensionless(g, j, d).unwrap();
                assert_relative_eq!(
                    oriented_scaling_variable(&t, 256.0).unwrap(),
                    v,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn collapse_examples() {
        let raw = RawMoment {
            eta: 64.0,
            g_tilde: 1.0,
            j_tilde: 0.5,
            d_tilde: 0.5,
            n: 1,
            value: 0.05,
        };
        let p = collapse_transform(&raw).unwrap();
        assert_relative_eq!(p.scaled_value, 0.8, max_relative = 1e-12);
        assert_eq!(p.v, 0.0);
        // g~_c = sqrt(2.5) contributes exactly g~_c^{4/3}.
        let raw2 = RawMoment {
            j_tilde: 1.5,
            d_tilde: 1.2,
            g_tilde: 1.5,
            ..raw
        };
        let p2 = collapse_transform(&raw2).unwrap();
        assert_relative_eq!(
            p2.scaled_value,
            0.8 * 2.5f64.powf(2.0 / 3.0),
            max_relative = 1e-12
        );
        let bad = RawMoment {
            j_tilde: 1.5,
            d_tilde: 0.5,
            ..raw
        };
        assert!(matches!(
            collapse_transform(&bad),
            Err(Error::NoCriticalPoint { .. })
        ));
    }

    #[test]
    fn exact_power_law_fit() {
        let pts: Vec<(f64, f64)> = [32.0, 64.0, 128.0, 256.0, 512.0f64]
            .iter()
            .map(|&e| (e, 7.0 * e.powf(-2.0 / 3.0)))
            .collect();
        let fit = loglog_fit(&pts).unwrap();
        assert!((fit.slope + 2.0 / 3.0).abs() < 1e-12);
        assert!((fit.intercept - 7f64.ln()).abs() < 1e-12);
        assert!(fit.max_residual < 1e-12);
    }

    #[test]
    fn fit_rejects_bad_data() {
        assert!(matches!(
            loglog_fit(&[(1.0, 1.0), (2.0, 2.0)]),
            Err(Error::InvalidData(_))
        ));
        assert!(matches!(
            loglog_fit(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]),
            Err(Error::InvalidData(_))
        ));
    }

    #[test]
    fn ode_harmonic_limit() {
        // Pure harmonic well -v u² with v < 0 and the quartic negligible.
        let v = -20.0;
        let s = universal_ode_solve(v, GridSpec::for_v(v)).unwrap();
        let w = (2.0 * 20.0f64).sqrt();
        assert!((s.moment(1) * 2.0 * w - 1.0).abs() < 0.05);
        assert!((s.energy / (w / 2.0) - 1.0).abs() < 0.05);
    }

    #[test]
    fn ode_double_well_limit() {
        let s = universal_ode_solve(20.0, GridSpec::for_v(20.0)).unwrap();
        let ratio = s.moment(1) / 80.0;
        assert!((0.9..=1.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn ode_reference_values() {
        let s = universal_ode_solve(0.0, GridSpec::for_v(0.0)).unwrap();
        assert!((s.moment(1) - 0.574675).abs() < 2e-5, "{}", s.moment(1));
        assert!((s.energy - 0.333993).abs() < 2e-5, "{}", s.energy);
        assert!(s.moment(2) >= s.moment(1).powi(2));
        let s = universal_ode_solve(1.0, GridSpec::for_v(1.0)).unwrap();
        assert!((s.moment(1) - 3.25436).abs() < 1e-3);
        assert!((s.energy + 1.09959).abs() < 1e-3);
    }

    #[test]
    fn ode_grid_checks() {
        assert!(matches!(
            universal_ode_solve(
                0.0,
                GridSpec {
                    u_max: 8.0,
                    points: 200
                }
            ),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            universal_ode_solve(
                20.0,
                GridSpec {
                    u_max: 9.0,
                    points: 401
                }
            ),
            Err(Error::GridTooSmall { .. })
        ));
    }

    #[test]
    fn monotone_interpolation() {
        let pts = [(0.0, 0.0), (1.0, 1.0), (2.0, 1.0), (3.0, 5.0)];
        let m = MonotoneCubic::new(&pts).unwrap();
        for (x, y) in pts {
            assert_relative_eq!(m.eval(x).unwrap(), y, epsilon = 1e-14);
        }
        // Flat segment stays flat, no overshoot.
        for i in 0..=10 {
            let y = m.eval(1.0 + i as f64 / 10.0).unwrap();
            assert!((y - 1.0).abs() < 1e-14);
        }
        assert!(m.eval(3.5).is_none());
    }

    #[test]
    fn spread_of_shifted_curves() {
        let a: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 1.0 + i as f64)).collect();
        let b: Vec<(f64, f64)> = a.iter().map(|&(x, y)| (x + 0.5, 1.02 * y)).collect();
        let grid: Vec<f64> = (0..20).map(|i| i as f64 * 0.5).collect();
        let s = collapse_spread(&[a, b], &grid).unwrap();
        assert!(s.compared > 0);
        assert!(s.max_spread > 0.0 && s.max_spread < 0.6);
    }
}
