use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qrd",
    version,
    about = "Quantum Rabi dimer laboratory: mean-field analytics, exact diagonalization and scaling sweeps",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal-mode frequencies of the qubit-free dimer.
    Bogoliubov(BogoliubovArgs),
    /// Mean-field (and optionally ED) phase classification over a parameter grid.
    PhaseDiagram(PhaseDiagramArgs),
    /// Finite-frequency scaling of <x-^{2n}> over a set of frequency ratios.
    Scaling(ScalingArgs),
    /// Landau coefficients of the normal modes of a cavity chain.
    ChainModes(ChainModesArgs),
    /// Exact diagonalization at a single parameter point.
    Ed(EdArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Full,
    Effective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EdModelArg {
    Full,
    Effective,
    Quadratic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Open,
    Periodic,
}

impl From<BoundaryArg> for qrd_core::Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Open => qrd_core::Boundary::Open,
            BoundaryArg::Periodic => qrd_core::Boundary::Periodic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    Meanfield,
    Ed,
    Both,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Flat TOML file whose keys mirror the long flag names; flags win.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Worker threads; 0 lets the pool pick.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Write the result here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// `start:stop:count[:log]` or a single value.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log: bool,
}

impl Axis {
    pub fn single(x: f64) -> Self {
        Self {
            start: x,
            stop: x,
            count: 1,
            log: false,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let s = i as f64 / n;
                if self.log {
                    (self.start.ln() + s * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + s * (self.stop - self.start)
                }
            })
            .collect()
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad number {t:?}: {e}"))
        };
        let axis = match parts.as_slice() {
            [x] => Axis::single(num(x)?),
            [a, b, c] | [a, b, c, _] => {
                let count = c
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| format!("bad count {c:?}: {e}"))?;
                let log = match parts.get(3).map(|t| t.trim()) {
                    None | Some("lin") | Some("linear") => false,
                    Some("log") => true,
                    Some(other) => return Err(format!("unknown axis spacing {other:?}")),
                };
                Axis {
                    start: num(a)?,
                    stop: num(b)?,
                    count,
                    log,
                }
            }
            _ => {
                return Err(format!(
                    "expected VALUE or START:STOP:COUNT[:log], got {s:?}"
                ))
            }
        };
        if axis.count == 0 {
            return Err("axis count must be at least 1".into());
        }
        if !(axis.start.is_finite() && axis.stop.is_finite()) {
            return Err("axis endpoints must be finite".into());
        }
        if axis.log && !(axis.start > 0.0 && axis.stop > 0.0) {
            return Err("log axes need positive endpoints".into());
        }
        Ok(axis)
    }
}

#[derive(Debug, Clone, Args)]
pub struct BogoliubovArgs {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub omega_r: f64,
    /// Bare A² amplitude `D`.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub d: f64,
    /// Bare hopping `J`.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub j: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct PhaseDiagramArgs {
    /// Value or axis for g~.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub gtilde: Axis,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub jtilde: Axis,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub dtilde: Axis,
    #[arg(long, value_enum, default_value_t = SweepMode::Meanfield)]
    pub mode: SweepMode,
    /// Frequency ratio for ED columns (`N eta` with --dicke-n).
    #[arg(long, default_value_t = 64.0)]
    pub eta: f64,
    #[command(flatten)]
    pub ed: SweepEd,
    #[command(flatten)]
    pub common: Common,
}

/// ED settings of the sweep commands.
#[derive(Debug, Clone, Args)]
pub struct SweepEd {
    /// Largest photon cutoff of the convergence schedule.
    #[arg(long, default_value_t = 183)]
    pub nmax: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = ModelArg::Full)]
    pub model: ModelArg,
    /// Qubits per cavity.
    #[arg(long, default_value_t = 1)]
    pub dicke_n: usize,
    #[arg(long)]
    pub allow_unstable: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ScalingArgs {
    /// Comma-separated frequency ratios (`N eta` with --dicke-n).
    #[arg(
        long,
        alias = "etas",
        value_delimiter = ',',
        default_value = "128,256,512"
    )]
    pub eta: Vec<f64>,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub jtilde: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub dtilde: f64,
    /// Scaling-variable axis.
    #[arg(long, default_value = "-2:2:9", allow_hyphen_values = true)]
    pub v_range: Axis,
    /// Moment order: the observable is <x-^{2n}>.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=3))]
    pub n: u32,
    #[command(flatten)]
    pub ed: SweepEd,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct ChainModesArgs {
    #[arg(long, short = 'L', default_value_t = 2)]
    pub sites: usize,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Open)]
    pub boundary: BoundaryArg,
    #[arg(long, default_value_t = 1.0)]
    pub gtilde: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub jtilde: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub dtilde: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct EdArgs {
    #[arg(long)]
    pub omega_r: Option<f64>,
    #[arg(long)]
    pub omega_q: Option<f64>,
    /// Bare qubit coupling.
    #[arg(long)]
    pub g: Option<f64>,
    /// Bare A² amplitude.
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<f64>,
    /// Bare hopping.
    #[arg(long, allow_hyphen_values = true)]
    pub j: Option<f64>,
    #[arg(long)]
    pub gtilde: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub jtilde: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub dtilde: Option<f64>,
    /// Frequency ratio of a single qubit.
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub sites: usize,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Open)]
    pub boundary: BoundaryArg,
    #[arg(long, default_value_t = 1)]
    pub dicke_n: usize,
    #[arg(long, value_enum, default_value_t = EdModelArg::Full)]
    pub model: EdModelArg,
    /// Photon cutoff, or `auto` to walk the convergence schedule.
    #[arg(long, default_value = "auto")]
    pub nmax: Cutoff,
    /// Largest cutoff tried by `--nmax auto`.
    #[arg(long, default_value_t = 183)]
    pub max_nmax: usize,
    /// Also report this many lowest eigenvalues at the cutoff used.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long)]
    pub allow_unstable: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cutoff {
    Auto,
    Fixed(usize),
}

impl FromStr for Cutoff {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(Cutoff::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Cutoff::Fixed(n)),
            _ => Err(format!("expected a positive cutoff or `auto`, got {s:?}")),
        }
    }
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Bogoliubov(a) => &a.common,
            Command::PhaseDiagram(a) => &a.common,
            Command::Scaling(a) => &a.common,
            Command::ChainModes(a) => &a.common,
            Command::Ed(a) => &a.common,
        }
    }
}
