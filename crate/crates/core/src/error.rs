use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no critical point: (1 - |J~|)/(1 - D~) must be positive and finite (J~ = {j_tilde}, D~ = {d_tilde})")]
    NoCriticalPoint { j_tilde: f64, d_tilde: f64 },

    #[error("Hilbert-space dimension {dim} exceeds the configured limit {limit}")]
    TooLarge { dim: usize, limit: usize },

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("eigensolver did not converge after {iterations} iterations (best residual {best_residual:e})")]
    NonConvergence {
        iterations: usize,
        best_residual: f64,
    },

    #[error("ground state did not converge in the photon cutoff; energies along the schedule: {history:?}")]
    TruncationNonConvergence { history: Vec<(usize, f64)> },

    #[error("parameters lie in the unstable region: {0}")]
    Unstable(String),

    #[error("order parameter is singular at g~ = 0 with a negative Landau coefficient")]
    SingularOrderParameter,

    #[error("scaling variable undefined: reduced couplings t_D and t_J must be non-zero")]
    UndefinedScalingVariable,

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("grid too small: probability mass {wall_mass:e} within 5 points of the wall")]
    GridTooSmall { wall_mass: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
