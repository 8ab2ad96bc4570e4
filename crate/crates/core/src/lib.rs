//! Numerical laboratory for the quantum Rabi dimer with diamagnetic (A²)
//! terms and intercavity hopping.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] holds parameter containers and the bare/dimensionless
//!   conversions every other module relies on.
//! * [`sparse`] and [`hamiltonian`] assemble real-symmetric operators over a
//!   truncated tensor-product Fock basis.
//! * [`eigensolver`] finds the lowest eigenpairs (thick-restart Lanczos with
//!   full reorthogonalization, dense fallback for small problems) and wraps
//!   them in a photon-cutoff convergence loop.
//! * [`observables`] decodes ground states into quadrature moments, photon
//!   numbers and parity.
//! * [`analytics`] collects the closed-form mean-field results.
//! * [`scaling`] implements the finite-frequency scaling machinery and an
//!   independent finite-difference solver of the universal eigenproblem.
//! * [`pipeline`] glues the pieces together for parameter sweeps.

pub mod analytics;
pub mod eigensolver;
mod error;
pub mod hamiltonian;
pub mod model;
pub mod observables;
pub mod pipeline;
pub mod scaling;
pub mod sparse;

pub use error::{Error, Result};

pub use analytics::{
    bogoliubov_frequencies, chain_modes, classify, critical_coupling, landau_coefficients,
    mean_field_order_parameter, superradiance_window, BogoliubovSpectrum, ChainModes, Frequency,
    LandauCoefficients, Phase, PhasePoint, SuperradianceWindow,
};
pub use eigensolver::{
    converged_ground_state, default_schedule, lowest_eigenpairs, lowest_eigenpairs_from,
    lowest_eigenpairs_with, ConvergedState, ConvergenceOptions, EigenOptions, Partner, Spectrum,
};
pub use hamiltonian::{
    build_chain, build_dicke_dimer, build_effective_dimer, build_effective_lower_branch, build_qrd,
    build_quadratic, parity_operator, Basis, HamiltonianKind, HamiltonianSpec, SiteState,
};
pub use model::{
    from_dimensionless, reduced_couplings, Boundary, Dimensionless, FockTruncation, ModelParams,
    ReducedCouplings, SystemShape,
};
pub use observables::{
    bare_quadrature_expectation, bare_quadrature_moment, photon_number, quadrature_expectation,
    quadrature_moment, GroundState, Mode,
};
pub use pipeline::{DimerModel, DimerPoint, PointOptions};
pub use scaling::{
    collapse_spread, collapse_transform, coupling_for_v, loglog_fit, oriented_scaling_variable,
    scaling_variable_v, universal_ground_energy, universal_ode_solve, CollapseSpread, GridSpec,
    LogLogFit, MonotoneCubic, RawMoment, ScalingExponents, ScalingPoint, UniversalSolution,
};
pub use sparse::SparseOperator;
