//! Parameter containers and unit conventions.
//!
//! Bare parameters are energies (`omega_r`, `omega_q`, `coupling`,
//! `a2_amplitude`, `hopping`). The dimensionless set used by the phase
//! diagrams is
//!
//! ```text
//! eta = omega_q / omega_r
//! g~  = 2 g / sqrt(omega_r omega_q)
//! J~  = 2 J / omega_r
//! D~  = D omega_q / g^2        (undefined at g = 0)
//! ```
//!
//! Sweeps fix the unit `omega_r = 1`.

use serde::Serialize;

use crate::analytics::critical_coupling;
use crate::{Error, Result};

/// Bare couplings of one dimer or chain instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub omega_r: f64,
    pub omega_q: f64,
    /// Qubit–field coupling `g`.
    pub coupling: f64,
    /// Amplitude `D` of the diamagnetic `(a + a†)²` term.
    pub a2_amplitude: f64,
    /// Intercavity hopping `J`.
    pub hopping: f64,
}

/// Dimensionless view of a [`ModelParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dimensionless {
    pub g_tilde: f64,
    pub j_tilde: f64,
    /// `None` when the qubit coupling vanishes.
    pub d_tilde: Option<f64>,
    pub eta: f64,
}

impl ModelParams {
    pub fn new(
        omega_r: f64,
        omega_q: f64,
        coupling: f64,
        a2_amplitude: f64,
        hopping: f64,
    ) -> Result<Self> {
        let params = Self {
            omega_r,
            omega_q,
            coupling,
            a2_amplitude,
            hopping,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_r.is_finite() && self.omega_r > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega_r must be positive, got {}",
                self.omega_r
            )));
        }
        if !(self.omega_q.is_finite() && self.omega_q > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega_q must be positive, got {}",
                self.omega_q
            )));
        }
        for (name, value) in [
            ("g", self.coupling),
            ("D", self.a2_amplitude),
            ("J", self.hopping),
        ] {
            if !value.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    pub fn eta(&self) -> f64 {
        self.omega_q / self.omega_r
    }

    pub fn g_tilde(&self) -> f64 {
        2.0 * self.coupling / (self.omega_r * self.omega_q).sqrt()
    }

    pub fn j_tilde(&self) -> f64 {
        2.0 * self.hopping / self.omega_r
    }

    /// `D omega_q / g²`, undefined at `g = 0`.
    pub fn d_tilde(&self) -> Option<f64> {
        (self.coupling != 0.0)
            .then(|| self.a2_amplitude * self.omega_q / (self.coupling * self.coupling))
    }

    pub fn dimensionless(&self) -> Dimensionless {
        Dimensionless {
            g_tilde: self.g_tilde(),
            j_tilde: self.j_tilde(),
            d_tilde: self.d_tilde(),
            eta: self.eta(),
        }
    }
}

impl Dimensionless {
    /// Bare parameters in units where the resonator frequency is `omega_r`.
    pub fn to_bare(&self, omega_r: f64) -> Result<ModelParams> {
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "eta must be positive, got {}",
                self.eta
            )));
        }
        if !(self.g_tilde.is_finite() && self.g_tilde >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "g~ must be non-negative, got {}",
                self.g_tilde
            )));
        }
        if !self.j_tilde.is_finite() {
            return Err(Error::InvalidParameter("J~ must be finite".into()));
        }
        let d_tilde = self.d_tilde.unwrap_or(0.0);
        if !d_tilde.is_finite() {
            return Err(Error::InvalidParameter("D~ must be finite".into()));
        }
        if self.g_tilde == 0.0 && d_tilde != 0.0 {
            return Err(Error::InvalidParameter(
                "D~ is undefined at g~ = 0; pass the bare A^2 amplitude instead".into(),
            ));
        }
        let omega_q = self.eta * omega_r;
        let coupling = self.g_tilde * (omega_r * omega_q).sqrt() / 2.0;
        let a2_amplitude = if coupling == 0.0 {
            0.0
        } else {
            d_tilde * coupling * coupling / omega_q
        };
        ModelParams::new(
            omega_r,
            omega_q,
            coupling,
            a2_amplitude,
            self.j_tilde * omega_r / 2.0,
        )
    }
}

/// Bare parameters from `(g~, J~, D~, eta)` with `omega_r = 1`.
pub fn from_dimensionless(
    g_tilde: f64,
    j_tilde: f64,
    d_tilde: f64,
    eta: f64,
) -> Result<ModelParams> {
    Dimensionless {
        g_tilde,
        j_tilde,
        d_tilde: Some(d_tilde),
        eta,
    }
    .to_bare(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

/// Number of cavities, qubits per cavity and boundary condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SystemShape {
    pub sites: usize,
    pub qubits_per_site: usize,
    pub boundary: Boundary,
}

impl SystemShape {
    pub fn new(sites: usize, qubits_per_site: usize, boundary: Boundary) -> Result<Self> {
        if sites == 0 {
            return Err(Error::InvalidParameter(
                "at least one cavity is required".into(),
            ));
        }
        if qubits_per_site == 0 {
            return Err(Error::InvalidParameter(
                "at least one qubit per cavity is required".into(),
            ));
        }
        if boundary == Boundary::Periodic && sites < 3 {
            return Err(Error::InvalidParameter(format!(
                "periodic boundary needs at least 3 cavities, got {sites}"
            )));
        }
        Ok(Self {
            sites,
            qubits_per_site,
            boundary,
        })
    }

    /// Two single-qubit cavities with open ends.
    pub fn dimer() -> Self {
        Self {
            sites: 2,
            qubits_per_site: 1,
            boundary: Boundary::Open,
        }
    }

    pub fn dicke_dimer(qubits_per_site: usize) -> Result<Self> {
        Self::new(2, qubits_per_site, Boundary::Open)
    }

    pub fn chain(sites: usize, boundary: Boundary) -> Result<Self> {
        Self::new(sites, 1, boundary)
    }

    /// Nearest-neighbour bonds `(i, i + 1)`, plus the wrap bond when periodic.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let mut bonds: Vec<_> = (0..self.sites.saturating_sub(1))
            .map(|i| (i, i + 1))
            .collect();
        if self.boundary == Boundary::Periodic {
            bonds.push((self.sites - 1, 0));
        }
        bonds
    }
}

/// Photon cutoff per cavity; the local boson dimension is `n_max + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FockTruncation {
    pub n_max: usize,
}

impl FockTruncation {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::InvalidParameter("n_max must be at least 1".into()));
        }
        Ok(Self { n_max })
    }

    pub fn boson_dim(&self) -> usize {
        self.n_max + 1
    }
}

/// Reduced distances from the critical manifold (`D~_c = J~_c = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedCouplings {
    pub t_g: f64,
    pub t_d: f64,
    pub t_j: f64,
}

impl ReducedCouplings {
    pub fn from_dimensionless(g_tilde: f64, j_tilde: f64, d_tilde: f64) -> Result<Self> {
        let g_c = critical_coupling(j_tilde, d_tilde)
            .ok_or(Error::NoCriticalPoint { j_tilde, d_tilde })?;
        Ok(Self {
            t_g: (g_tilde - g_c) / g_c,
            t_d: d_tilde - 1.0,
            t_j: j_tilde.abs() - 1.0,
        })
    }
}

pub fn reduced_couplings(params: &ModelParams) -> Result<ReducedCouplings> {
    let d_tilde = params.d_tilde().ok_or_else(|| {
        Error::InvalidParameter("D~ is undefined at g = 0, so t_D cannot be formed".into())
    })?;
    ReducedCouplings::from_dimensionless(params.g_tilde(), params.j_tilde(), d_tilde)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn dimensionless_substitution() {
        let p = from_dimensionless(1.0, 1.0, 0.5, 4.0).unwrap();
        assert_eq!(p.omega_r, 1.0);
        assert_eq!(p.omega_q, 4.0);
        assert_eq!(p.coupling, 1.0);
        assert_eq!(p.hopping, 0.5);
        assert_eq!(p.a2_amplitude, 0.125);

        let zero = from_dimensionless(0.0, 0.0, 0.0, 10.0).unwrap();
        assert_eq!(
            (zero.omega_q, zero.coupling, zero.hopping, zero.a2_amplitude),
            (10.0, 0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn large_eta_recovers_inputs() {
        let p = from_dimensionless(1.2, 0.8, 0.5, 512.0).unwrap();
        assert_relative_eq!(p.coupling, 0.6 * 512f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(p.coupling, 13.576450198781711, max_relative = 1e-12);
        assert_relative_eq!(p.a2_amplitude, 0.18, max_relative = 1e-14);
        assert_relative_eq!(p.hopping, 0.4, max_relative = 1e-14);
        // Recompute the dimensionless set straight from the definitions.
        let g_t = 2.0 * p.coupling / (p.omega_r * p.omega_q).sqrt();
        let j_t = 2.0 * p.hopping / p.omega_r;
        let d_t = p.a2_amplitude * p.omega_q / p.coupling.powi(2);
        assert_relative_eq!(g_t, 1.2, max_relative = 1e-12);
        assert_relative_eq!(j_t, 0.8, max_relative = 1e-12);
        assert_relative_eq!(d_t, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn invalid_dimensionless_inputs() {
        assert!(matches!(
            from_dimensionless(1.0, 0.0, 0.0, 0.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            from_dimensionless(1.0, 0.0, 0.0, -2.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            from_dimensionless(0.0, 0.0, 0.3, 2.0),
            Err(Error::InvalidParameter(_))
        ));
        assert_eq!(
            ModelParams::new(1.0, 1.0, 0.0, 0.2, 0.0).unwrap().d_tilde(),
            None
        );
    }

    #[test]
    fn reduced_couplings_examples() {
        let t = ReducedCouplings::from_dimensionless(1.0, 0.5, 0.5).unwrap();
        assert_eq!((t.t_g, t.t_d, t.t_j), (0.0, -0.5, -0.5));

        let t = ReducedCouplings::from_dimensionless(1.1, 0.5, 0.5).unwrap();
        assert_relative_eq!(t.t_g, 0.1, max_relative = 1e-12);

        // g~_c = sqrt(2.5) evaluated independently.
        let g_c = (0.5f64 / 0.2).sqrt();
        let t = ReducedCouplings::from_dimensionless(1.5811, 1.5, 1.2).unwrap();
        assert!(t.t_g.abs() < 1e-4);
        assert_relative_eq!(t.t_g, (1.5811 - g_c) / g_c, max_relative = 1e-10);
        assert_relative_eq!(t.t_d, 0.2, max_relative = 1e-12);
        assert_relative_eq!(t.t_j, 0.5, max_relative = 1e-12);

        let p = from_dimensionless(1.1, 0.5, 0.5, 64.0).unwrap();
        assert_relative_eq!(
            reduced_couplings(&p).unwrap().t_g,
            0.1,
            max_relative = 1e-10
        );
    }

    #[test]
    fn reduced_couplings_without_critical_point() {
        for (j, d) in [(1.5, 0.5), (0.5, 1.0), (0.5, 1.5)] {
            assert!(matches!(
                ReducedCouplings::from_dimensionless(1.0, j, d),
                Err(Error::NoCriticalPoint { .. })
            ));
        }
    }

    #[test]
    fn shape_validation() {
        assert!(SystemShape::new(0, 1, Boundary::Open).is_err());
        assert!(SystemShape::new(2, 0, Boundary::Open).is_err());
        assert!(SystemShape::chain(2, Boundary::Periodic).is_err());
        assert_eq!(
            SystemShape::chain(3, Boundary::Periodic).unwrap().bonds(),
            vec![(0, 1), (1, 2), (2, 0)]
        );
        assert_eq!(SystemShape::dimer().bonds(), vec![(0, 1)]);
        assert!(FockTruncation::new(0).is_err());
    }

    proptest! {
        #[test]
        fn bare_dimensionless_round_trip(
            omega_r in 0.1f64..10.0,
            eta in 0.01f64..1e4,
            g in 0.01f64..50.0,
            d in -20.0f64..20.0,
            j in -20.0f64..20.0,
        ) {
            let bare = ModelParams::new(omega_r, eta * omega_r, g, d, j).unwrap();
            let back = bare.dimensionless().to_bare(omega_r).unwrap();
            for (a, b) in [
                (bare.omega_q, back.omega_q),
                (bare.coupling, back.coupling),
                (bare.a2_amplitude, back.a2_amplitude),
                (bare.hopping, back.hopping),
            ] {
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
            }
        }

        #[test]
        fn critical_coupling_identity(j in 0.0f64..3.0, d in -3.0f64..3.0) {
            if let Some(g_c) = critical_coupling(j, d) {
                prop_assert!((g_c * g_c * (1.0 - d) + j - 1.0).abs() < 1e-12 * (1.0 + j.abs()));
            }
        }
    }
}
