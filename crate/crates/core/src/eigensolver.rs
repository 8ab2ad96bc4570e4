//! Lowest eigenpairs of real-symmetric sparse operators.
//!
//! Large operators go through a thick-restart Lanczos iteration with full
//! (twice-applied classical Gram-Schmidt) reorthogonalisation. Operators of
//! dimension at most [`EigenOptions::dense_threshold`] are diagonalised
//! densely instead. Every reduction runs over fixed chunks in a fixed order,
//! so results are bitwise reproducible for a given build and input.
//!
//! Ground states are found one parity sector at a time. Each cutoff of the
//! convergence walk starts Lanczos from the previous cutoff's sector state.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::hamiltonian::{Basis, HamiltonianKind, HamiltonianSpec};
use crate::model::FockTruncation;
use crate::observables::{quadrature_moment, GroundState, Mode};
use crate::sparse::{axpy, SparseOperator};
use crate::{Error, Result};

const REDUCE_CHUNK: usize = 8192;
const START_SEED: u64 = 0x5152_445f_7374_6172;

#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    #[serde(skip)]
    pub vectors: Vec<Vec<f64>>,
    /// `||H v - lambda v||_2` per pair.
    pub residuals: Vec<f64>,
    /// Matrix-vector products spent (zero on the dense path).
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    pub k: usize,
    /// Residual bound every returned pair must meet.
    pub tol: f64,
    pub max_restarts: usize,
    /// Krylov basis size; `None` picks `max(2k + 24, 40)`.
    pub krylov_dim: Option<usize>,
    pub dense_threshold: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            k: 1,
            tol: 1e-9,
            max_restarts: 400,
            krylov_dim: None,
            dense_threshold: 1024,
        }
    }
}

/// `k` lowest eigenpairs with residuals at most `tol`.
pub fn lowest_eigenpairs(op: &SparseOperator, k: usize, tol: f64) -> Result<Spectrum> {
    lowest_eigenpairs_with(
        op,
        &EigenOptions {
            k,
            tol,
            ..EigenOptions::default()
        },
    )
}

pub fn lowest_eigenpairs_with(op: &SparseOperator, opts: &EigenOptions) -> Result<Spectrum> {
    lowest_eigenpairs_from(op, opts, None)
}

/// As [`lowest_eigenpairs_with`], seeding the Krylov space with `start`.
///
/// A start vector confined to a symmetry sector keeps the iteration there up
/// to rounding. A zero or wrongly sized `start` falls back to the default.
pub fn lowest_eigenpairs_from(
    op: &SparseOperator,
    opts: &EigenOptions,
    start: Option<&[f64]>,
) -> Result<Spectrum> {
    if !op.is_hermitian() {
        return Err(Error::InvalidOperator("operator is not symmetric".into()));
    }
    if opts.k == 0 || opts.k > op.dim() {
        return Err(Error::InvalidArgument(format!(
            "requested {} eigenpairs of a {}-dimensional operator",
            opts.k,
            op.dim()
        )));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if op.dim() <= opts.dense_threshold {
        dense(op, opts)
    } else {
        lanczos(op, opts, start)
    }
}

fn pdot(a: &[f64], b: &[f64]) -> f64 {
    let partial: Vec<f64> = a
        .par_chunks(REDUCE_CHUNK)
        .zip(b.par_chunks(REDUCE_CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum())
        .collect();
    partial.iter().sum()
}

fn pnorm(a: &[f64]) -> f64 {
    pdot(a, a).sqrt()
}

fn scale(v: &mut [f64], s: f64) {
    v.iter_mut().for_each(|x| *x *= s);
}

fn residual(op: &SparseOperator, v: &[f64], lambda: f64) -> f64 {
    let mut r = op.mul_vec(v);
    axpy(-lambda, v, &mut r);
    pnorm(&r)
}

fn dense(op: &SparseOperator, opts: &EigenOptions) -> Result<Spectrum> {
    let eig = SymmetricEigen::new(op.to_dense());
    let mut order: Vec<usize> = (0..op.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut spec = Spectrum {
        eigenvalues: Vec::with_capacity(opts.k),
        vectors: Vec::with_capacity(opts.k),
        residuals: Vec::with_capacity(opts.k),
        iterations: 0,
        converged: true,
    };
    for &i in order.iter().take(opts.k) {
        let v: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
        let lambda = eig.eigenvalues[i];
        spec.residuals.push(residual(op, &v, lambda));
        spec.eigenvalues.push(lambda);
        spec.vectors.push(v);
    }
    let worst = spec.residuals.iter().copied().fold(0.0, f64::max);
    if worst > opts.tol {
        return Err(Error::NonConvergence {
            iterations: 0,
            best_residual: worst,
        });
    }
    Ok(spec)
}

/// Normalised all-ones vector with a fixed pseudo-random perturbation, so no
/// symmetry sector of the operator is missed.
fn start_vector(dim: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut v: Vec<f64> = (0..dim)
        .map(|_| 1.0 + rng.random_range(-0.5..0.5))
        .collect();
    let n = pnorm(&v);
    scale(&mut v, 1.0 / n);
    v
}

/// Orthogonalise `w` against `basis` twice; returns the summed coefficients.
fn orthogonalize(basis: &[Vec<f64>], w: &mut [f64]) -> Vec<f64> {
    let mut total = vec![0.0; basis.len()];
    for _ in 0..2 {
        let coeffs: Vec<f64> = basis.iter().map(|b| pdot(b, w)).collect();
        w.par_chunks_mut(REDUCE_CHUNK)
            .enumerate()
            .for_each(|(c, out)| {
                let span = c * REDUCE_CHUNK..c * REDUCE_CHUNK + out.len();
                for (b, &coef) in basis.iter().zip(&coeffs) {
                    for (wi, bi) in out.iter_mut().zip(&b[span.clone()]) {
                        *wi -= coef * bi;
                    }
                }
            });
        for (t, c) in total.iter_mut().zip(&coeffs) {
            *t += c;
        }
    }
    total
}

/// `sum_i coeffs[i] * basis[i]`.
fn combine(basis: &[Vec<f64>], coeffs: &[f64]) -> Vec<f64> {
    let dim = basis[0].len();
    let mut out = vec![0.0; dim];
    out.par_chunks_mut(REDUCE_CHUNK)
        .enumerate()
        .for_each(|(c, chunk)| {
            let span = c * REDUCE_CHUNK..c * REDUCE_CHUNK + chunk.len();
            for (b, &coef) in basis.iter().zip(coeffs) {
                for (o, bi) in chunk.iter_mut().zip(&b[span.clone()]) {
                    *o += coef * bi;
                }
            }
        });
    out
}

fn random_orthogonal(basis: &[Vec<f64>], dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let mut w: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        orthogonalize(basis, &mut w);
        let n = pnorm(&w);
        if n > 1e-8 {
            scale(&mut w, 1.0 / n);
            return w;
        }
    }
}

fn lanczos(op: &SparseOperator, opts: &EigenOptions, start: Option<&[f64]>) -> Result<Spectrum> {
    let dim = op.dim();
    let k = opts.k;
    let m = opts
        .krylov_dim
        .unwrap_or((2 * k + 24).max(40))
        .max(k + 2)
        .min(dim);
    if m < k + 1 {
        return dense(op, opts);
    }
    let keep = (k + (m - k) / 2).min(m - 1);
    // Max absolute row sum bounds the spectral radius; used for breakdown tests.
    let anorm = op.max_abs_row_sum().max(f64::MIN_POSITIVE);
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED ^ 0xa5a5);

    let first = start
        .filter(|v| v.len() == dim)
        .and_then(|v| {
            let n = pnorm(v);
            (n > 0.0 && n.is_finite()).then(|| v.iter().map(|x| x / n).collect())
        })
        .unwrap_or_else(|| start_vector(dim));
    let mut basis: Vec<Vec<f64>> = vec![first];
    let mut t = DMatrix::<f64>::zeros(m, m);
    let mut start = 0;
    let mut matvecs = 0;
    let mut best = f64::INFINITY;

    for _ in 0..opts.max_restarts {
        let mut resid = Vec::new();
        let mut beta = 0.0;
        for j in start..m {
            let mut w = op.mul_vec(&basis[j]);
            matvecs += 1;
            let h = orthogonalize(&basis, &mut w);
            for (i, &hij) in h.iter().enumerate() {
                t[(i, j)] = hij;
                t[(j, i)] = hij;
            }
            beta = pnorm(&w);
            if j + 1 < m {
                if beta <= 1e-13 * anorm {
                    // Invariant subspace found; continue in a fresh direction.
                    let fresh = random_orthogonal(&basis, dim, &mut rng);
                    basis.push(fresh);
                } else {
                    scale(&mut w, 1.0 / beta);
                    t[(j + 1, j)] = beta;
                    t[(j, j + 1)] = beta;
                    basis.push(w);
                }
            } else {
                resid = w;
            }
        }

        let eig = SymmetricEigen::new(t.clone());
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let estimates: Vec<f64> = order
            .iter()
            .map(|&i| (beta * eig.eigenvectors[(m - 1, i)]).abs())
            .collect();
        let worst_estimate = estimates[..k].iter().copied().fold(0.0, f64::max);

        if worst_estimate <= opts.tol {
            let mut spec = Spectrum {
                eigenvalues: Vec::with_capacity(k),
                vectors: Vec::with_capacity(k),
                residuals: Vec::with_capacity(k),
                iterations: matvecs,
                converged: true,
            };
            for &i in &order[..k] {
                let y: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
                let mut v = combine(&basis, &y);
                let n = pnorm(&v);
                scale(&mut v, 1.0 / n);
                let lambda = eig.eigenvalues[i];
                spec.residuals.push(residual(op, &v, lambda));
                spec.eigenvalues.push(lambda);
                spec.vectors.push(v);
            }
            let worst = spec.residuals.iter().copied().fold(0.0, f64::max);
            best = best.min(worst);
            if worst <= opts.tol {
                return Ok(spec);
            }
        } else {
            best = best.min(worst_estimate);
        }

        // Thick restart: keep the lowest Ritz vectors and the residual direction.
        let mut kept: Vec<Vec<f64>> = Vec::with_capacity(m);
        for &i in &order[..keep] {
            let y: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
            kept.push(combine(&basis, &y));
        }
        t.fill(0.0);
        for (slot, &i) in order[..keep].iter().enumerate() {
            t[(slot, slot)] = eig.eigenvalues[i];
        }
        if beta <= 1e-13 * anorm {
            let fresh = random_orthogonal(&kept, dim, &mut rng);
            kept.push(fresh);
        } else {
            for (slot, &i) in order[..keep].iter().enumerate() {
                let s = beta * eig.eigenvectors[(m - 1, i)];
                t[(slot, keep)] = s;
                t[(keep, slot)] = s;
            }
            scale(&mut resid, 1.0 / beta);
            kept.push(resid);
        }
        basis = kept;
        start = keep;
    }
    Err(Error::NonConvergence {
        iterations: matvecs,
        best_residual: best,
    })
}

/// The next cutoff after `n` in the default geometric schedule.
fn next_cutoff(n: usize) -> usize {
    ((n as f64) * 1.5).round() as usize
}

/// `16, 24, 36, 54, 81, ...` up to and including `max_n_max`.
pub fn default_schedule(max_n_max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = 16;
    while n <= max_n_max {
        out.push(n);
        n = next_cutoff(n);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceOptions {
    /// Bound on the ground-energy change, in units of the natural energy scale
    /// (`omega_q` with qubits, `omega_r` without).
    pub tol: f64,
    /// Increasing photon cutoffs to try.
    pub schedule: Vec<usize>,
    pub allow_unstable: bool,
    /// Residual bound handed to the eigensolver; `None` derives one from `tol`.
    pub residual_tol: Option<f64>,
    /// Also require `<x-²>` of a dimer to settle, to `10 tol` relative.
    pub track_order_parameter: bool,
}

impl Default for ConvergenceOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            schedule: default_schedule(183),
            allow_unstable: false,
            residual_tol: None,
            track_order_parameter: true,
        }
    }
}

/// Second state of a near-degenerate parity doublet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Partner {
    pub energy: f64,
    pub parity: i32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergedState {
    pub state: GroundState,
    pub n_max: usize,
    /// `(n_max, ground energy)` for every cutoff tried, in matrix units.
    pub history: Vec<(usize, f64)>,
    pub residual: f64,
    /// Present when the two lowest levels are closer than `100 tol`.
    pub partner: Option<Partner>,
}

fn natural_unit(spec: &HamiltonianSpec) -> f64 {
    match spec.kind {
        HamiltonianKind::Full => spec.params.omega_q,
        HamiltonianKind::Effective => 1.0,
        HamiltonianKind::Quadratic => spec.params.omega_r,
    }
}

struct Solved {
    state: GroundState,
    residual: f64,
    partner: Option<Partner>,
}

/// Lowest state of each parity sector at one cutoff, kept to seed the next.
struct Seeds {
    basis: Basis,
    /// Even then odd; full-basis vectors.
    vectors: [Option<Vec<f64>>; 2],
}

/// Ground state at one cutoff, resolved into a parity eigenstate.
pub fn ground_state_at(
    spec: &HamiltonianSpec,
    trunc: FockTruncation,
    residual_tol: f64,
    degeneracy_tol: f64,
) -> Result<(GroundState, f64, Option<Partner>)> {
    let (s, _) = solve_at(spec, trunc, residual_tol, degeneracy_tol, None)?;
    Ok((s.state, s.residual, s.partner))
}

/// Solves the even and odd sectors separately. Within `degeneracy_tol` the
/// even state wins; otherwise the lower one does.
fn solve_at(
    spec: &HamiltonianSpec,
    trunc: FockTruncation,
    residual_tol: f64,
    degeneracy_tol: f64,
    seeds: Option<&Seeds>,
) -> Result<(Solved, Seeds)> {
    let op = spec.build(trunc)?;
    // Residuals cannot drop far below machine precision times the norm.
    let floor = 64.0 * f64::EPSILON * op.max_abs_row_sum();
    let eopts = EigenOptions {
        k: 1,
        tol: residual_tol.max(floor),
        ..EigenOptions::default()
    };
    let basis = spec.basis(trunc);
    let signs = basis.parity_signs();

    let mut found: [Option<(f64, Vec<f64>, f64)>; 2] = [None, None];
    for (slot, sector) in [(0usize, 1.0), (1, -1.0)] {
        let idx: Vec<usize> = (0..signs.len()).filter(|&i| signs[i] == sector).collect();
        if idx.is_empty() {
            continue;
        }
        let sub = op.restrict(&idx)?;
        let start: Option<Vec<f64>> = seeds.and_then(|sd| {
            sd.vectors[slot].as_ref().map(|v| {
                let big = sd.basis.embed(&basis, v);
                idx.iter().map(|&i| big[i]).collect()
            })
        });
        let sp = lowest_eigenpairs_from(&sub, &eopts, start.as_deref())?;
        let mut full = vec![0.0; signs.len()];
        for (&i, &x) in idx.iter().zip(&sp.vectors[0]) {
            full[i] = x;
        }
        found[slot] = Some((sp.eigenvalues[0], full, sp.residuals[0]));
    }

    let residual = found.iter().flatten().map(|f| f.2).fold(0.0, f64::max);
    let pick = match (&found[0], &found[1]) {
        (Some(e), Some(o)) if o.0 < e.0 - degeneracy_tol => 1,
        (Some(_), _) => 0,
        _ => 1,
    };
    let other = 1 - pick;
    let partner = found[other].as_ref().and_then(|f| {
        let e0 = found[pick].as_ref().map(|p| p.0)?;
        ((f.0 - e0).abs() < degeneracy_tol).then_some(Partner {
            energy: f.0,
            parity: if other == 0 { 1 } else { -1 },
        })
    });
    let (energy, vector, _) = found[pick]
        .clone()
        .ok_or_else(|| Error::InvalidArgument("empty Hilbert space".into()))?;
    let state = GroundState::new(spec, trunc, vector, energy)?;
    let seeds = Seeds {
        basis,
        vectors: found.map(|f| f.map(|f| f.1)),
    };
    Ok((
        Solved {
            state,
            residual,
            partner,
        },
        seeds,
    ))
}

fn residual_target(spec: &HamiltonianSpec, opts: &ConvergenceOptions) -> f64 {
    opts.residual_tol.unwrap_or_else(|| {
        // Resonator frequency in matrix units sets the smallest relevant gap.
        let gap = spec.params.omega_r / spec.energy_unit();
        1e-2 * opts.tol * gap
    })
}

/// Walk the cutoff schedule until the ground energy and `<x-²>` stop moving.
///
/// The returned state is the smaller cutoff of the first agreeing pair.
pub fn converged_ground_state(
    spec: &HamiltonianSpec,
    opts: &ConvergenceOptions,
) -> Result<ConvergedState> {
    spec.params.validate()?;
    if !spec.is_stable() && !opts.allow_unstable {
        return Err(Error::Unstable(format!(
            "bosonic modes are unbounded for {:?}; pass allow_unstable to probe the divergence",
            spec.params
        )));
    }
    if opts.schedule.len() < 2 || opts.schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "cutoff schedule needs at least two strictly increasing entries".into(),
        ));
    }
    let unit = natural_unit(spec) / spec.energy_unit();
    let resid_tol = residual_target(spec, opts);
    let degeneracy_tol = 100.0 * opts.tol * unit;
    let dimer = spec.shape.sites == 2 && opts.track_order_parameter;
    let order_parameter = |s: &GroundState| -> Result<Option<f64>> {
        if dimer {
            quadrature_moment(s, Mode::Minus, 2).map(Some)
        } else {
            Ok(None)
        }
    };

    let mut history = Vec::with_capacity(opts.schedule.len());
    let mut previous: Option<(Solved, Option<f64>)> = None;
    let mut seeds: Option<Seeds> = None;
    for &n_max in &opts.schedule {
        let trunc = FockTruncation::new(n_max)?;
        let (solved, next) = solve_at(spec, trunc, resid_tol, degeneracy_tol, seeds.as_ref())?;
        seeds = Some(next);
        let x2 = order_parameter(&solved.state)?;
        history.push((n_max, solved.state.energy));
        if let Some((prev, prev_x2)) = previous.take() {
            let de = (solved.state.energy - prev.state.energy).abs() / unit;
            let dx = match (x2, prev_x2) {
                (Some(a), Some(b)) => (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE),
                _ => 0.0,
            };
            if de < opts.tol && dx < 10.0 * opts.tol {
                let n_prev = history[history.len() - 2].0;
                return Ok(ConvergedState {
                    n_max: n_prev,
                    residual: prev.residual,
                    partner: prev.partner,
                    state: prev.state,
                    history,
                });
            }
        }
        previous = Some((solved, x2));
    }
    Err(Error::TruncationNonConvergence { history })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::bogoliubov_frequencies;
    use crate::hamiltonian::{build_qrd, build_quadratic};
    use crate::model::{from_dimensionless, ModelParams, SystemShape};

    #[test]
    fn explicit_diagonal() {
        let op = SparseOperator::diagonal_matrix(&[3.0, 1.0, 2.0]);
        let s = lowest_eigenpairs(&op, 2, 1e-12).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 2.0]);
        assert!((s.vectors[0][1].abs() - 1.0).abs() < 1e-14);
        assert!((s.vectors[1][2].abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lanczos_on_large_diagonal() {
        let entries: Vec<f64> = (0..3000)
            .map(|i| ((i * 7919) % 3000) as f64 * 0.01)
            .collect();
        let op = SparseOperator::diagonal_matrix(&entries);
        let s = lowest_eigenpairs(&op, 3, 1e-10).unwrap();
        assert!(s.iterations > 0);
        for (got, want) in s.eigenvalues.iter().zip([0.0, 0.01, 0.02]) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_asymmetric_and_bad_k() {
        let op = SparseOperator::from_triplets(2, &[(0, 1, 1.0), (1, 0, 2.0)]).unwrap();
        assert!(matches!(
            lowest_eigenpairs(&op, 1, 1e-9),
            Err(Error::InvalidOperator(_))
        ));
        let op = SparseOperator::diagonal_matrix(&[1.0]);
        assert!(matches!(
            lowest_eigenpairs(&op, 2, 1e-9),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn tight_iteration_budget_reports_non_convergence() {
        let p = from_dimensionless(1.0, 0.5, 0.5, 64.0).unwrap();
        let op = build_qrd(&p, FockTruncation::new(30).unwrap()).unwrap();
        let opts = EigenOptions {
            k: 1,
            tol: 1e-12,
            max_restarts: 1,
            krylov_dim: Some(6),
            ..EigenOptions::default()
        };
        match lowest_eigenpairs_with(&op, &opts) {
            Err(Error::NonConvergence { best_residual, .. }) => assert!(best_residual > 1e-12),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn decoupled_vacuum() {
        let p = ModelParams::new(1.0, 3.0, 0.0, 0.0, 0.0).unwrap();
        let op = build_qrd(&p, FockTruncation::new(20).unwrap()).unwrap();
        let s = lowest_eigenpairs(&op, 1, 1e-10).unwrap();
        assert!((s.eigenvalues[0] + 3.0).abs() < 1e-10);
        assert!(s.residuals[0] <= 1e-10);
    }

    #[test]
    fn quadratic_ground_energy() {
        let p = ModelParams::new(1.0, 1.0, 0.0, 0.25, 0.25).unwrap();
        let op = build_quadratic(&p, FockTruncation::new(80).unwrap()).unwrap();
        let s = lowest_eigenpairs(&op, 1, 1e-10).unwrap();
        let exact = bogoliubov_frequencies(1.0, 0.25, 0.25)
            .ground_energy(1.0)
            .unwrap();
        assert!((s.eigenvalues[0] - exact).abs() < 1e-8);
        assert!((s.eigenvalues[0] - 0.4029418507).abs() < 1e-9);
    }

    #[test]
    fn repeated_solves_are_bitwise_identical() {
        let p = from_dimensionless(0.9, 0.3, 0.2, 16.0).unwrap();
        let op = build_qrd(&p, FockTruncation::new(24).unwrap()).unwrap();
        let a = lowest_eigenpairs(&op, 2, 1e-10).unwrap();
        let b = lowest_eigenpairs(&op, 2, 1e-10).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.vectors, b.vectors);
    }

    #[test]
    fn ritz_vectors_are_orthonormal() {
        let p = from_dimensionless(1.1, 0.4, 0.4, 8.0).unwrap();
        let op = build_qrd(&p, FockTruncation::new(20).unwrap()).unwrap();
        let s = lowest_eigenpairs(&op, 4, 1e-9).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let d = pdot(&s.vectors[i], &s.vectors[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-10);
            }
            assert!(s.residuals[i] <= 1e-9);
        }
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn warm_start_stays_in_its_sector() {
        let p = from_dimensionless(1.3, 0.0, 0.0, 64.0).unwrap();
        let spec = HamiltonianSpec::full(p, SystemShape::dimer());
        let trunc = FockTruncation::new(40).unwrap();
        let op = spec.build(trunc).unwrap();
        let signs = spec.basis(trunc).parity_signs();
        let odd: Vec<f64> = signs
            .iter()
            .map(|&s| if s < 0.0 { 1.0 } else { 0.0 })
            .collect();
        let opts = EigenOptions {
            k: 1,
            tol: 1e-9,
            ..EigenOptions::default()
        };
        let s = lowest_eigenpairs_from(&op, &opts, Some(&odd)).unwrap();
        let even_weight: f64 = s.vectors[0]
            .iter()
            .zip(&signs)
            .filter(|(_, &sg)| sg > 0.0)
            .map(|(x, _)| x * x)
            .sum();
        assert!(even_weight < 1e-12);
        let both = lowest_eigenpairs(&op, 2, 1e-9).unwrap();
        assert!(s.eigenvalues[0] >= both.eigenvalues[0] - 1e-9);
    }

    #[test]
    fn doublet_resolves_to_even_state_with_partner() {
        let p = from_dimensionless(2.0, 0.0, 0.0, 32.0).unwrap();
        let spec = HamiltonianSpec::full(p, SystemShape::dimer());
        let (state, _, partner) =
            ground_state_at(&spec, FockTruncation::new(60).unwrap(), 1e-10, 1e-6).unwrap();
        assert_eq!(state.parity, 1);
        let partner = partner.expect("deep superradiant doublet");
        assert_eq!(partner.parity, -1);
        assert!((partner.energy - state.energy).abs() < 1e-6);
    }

    #[test]
    fn schedule_values() {
        assert_eq!(
            default_schedule(420),
            vec![16, 24, 36, 54, 81, 122, 183, 275, 413]
        );
    }

    #[test]
    fn deep_normal_phase_converges_at_first_step() {
        let p = from_dimensionless(0.5, 0.0, 0.0, 32.0).unwrap();
        let spec = HamiltonianSpec::full(p, SystemShape::dimer());
        let c = converged_ground_state(&spec, &ConvergenceOptions::default()).unwrap();
        assert_eq!(c.n_max, 16);
        assert_eq!(c.history.len(), 2);
        assert!(crate::observables::photon_number(&c.state, 0).unwrap() < 0.1);
    }

    #[test]
    fn boson_free_case_is_exact_at_smallest_cutoff() {
        let p = ModelParams::new(1.0, 2.0, 0.0, 0.0, 0.0).unwrap();
        let spec = HamiltonianSpec::full(p, SystemShape::dimer());
        let opts = ConvergenceOptions {
            schedule: vec![1, 2],
            ..ConvergenceOptions::default()
        };
        let c = converged_ground_state(&spec, &opts).unwrap();
        assert_eq!(c.n_max, 1);
        assert_eq!(c.state.energy, -2.0);
    }

    #[test]
    fn unstable_point_is_refused_then_diverges() {
        let p = from_dimensionless(0.5, 1.5, 0.5, 8.0).unwrap();
        let spec = HamiltonianSpec::full(p, SystemShape::dimer());
        assert!(matches!(
            converged_ground_state(&spec, &ConvergenceOptions::default()),
            Err(Error::Unstable(_))
        ));
        let opts = ConvergenceOptions {
            allow_unstable: true,
            schedule: default_schedule(60),
            ..ConvergenceOptions::default()
        };
        match converged_ground_state(&spec, &opts) {
            Err(Error::TruncationNonConvergence { history }) => {
                assert_eq!(history.len(), 4);
                assert!(history.windows(2).all(|w| w[1].1 < w[0].1));
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }
}
