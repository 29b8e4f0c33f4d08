use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normalform::NetworkSystem;
use crate::polyalg::{ConjPoly, DEFAULT_EPS_RES};
use crate::presets::ring_adjacency;

/// Populations of Kuramoto oscillators with Lorentzian frequencies, coupled
/// internally with strength `mu` and across populations with `alpha`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldSpec {
    /// Centre frequency of each population.
    pub omega: Vec<f64>,
    /// Lorentzian half-width of each population.
    pub sigma: Vec<f64>,
    pub mu: f64,
    pub alpha: f64,
    pub adjacency: Vec<Vec<f64>>,
}

impl MeanFieldSpec {
    /// Four populations on a ring with `Omega = (2, 3, 4, 1)`, so that
    /// `Omega_1 + Omega_3 = 2 Omega_2` and `Omega_2 + Omega_4 = 2 Omega_1`.
    pub fn reference() -> Self {
        Self {
            omega: vec![2.0, 3.0, 4.0, 1.0],
            sigma: vec![0.48; 4],
            mu: 0.5,
            alpha: 0.1,
            adjacency: ring_adjacency(4),
        }
    }

    pub fn n(&self) -> usize {
        self.omega.len()
    }

    /// Amplitude `sqrt((mu - sigma_k) / mu)` of the uncoupled mean field.
    pub fn radii(&self) -> Result<Vec<f64>> {
        self.check()?;
        Ok(self
            .sigma
            .iter()
            .map(|s| ((self.mu - s) / self.mu).sqrt())
            .collect())
    }

    fn check(&self) -> Result<()> {
        if self.sigma.len() != self.n() {
            return Err(Error::Dimension {
                expected: self.n(),
                found: self.sigma.len(),
            });
        }
        for (k, &s) in self.sigma.iter().enumerate() {
            if self.mu <= s {
                return Err(Error::Subcritical {
                    node: k + 1,
                    mu: self.mu,
                    sigma: s,
                });
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<NetworkSystem> {
        oa_build(self)
    }
}

/// Ott-Antonsen mean-field network:
/// `gamma_k = mu - sigma_k + i Omega_k`, `beta_k = -mu`, `h(z, w) = w + conj(w) z^2`.
pub fn oa_build(spec: &MeanFieldSpec) -> Result<NetworkSystem> {
    spec.check()?;
    let n = spec.n();
    let one = Complex64::new(1.0, 0.0);
    let coupling =
        &ConjPoly::monomial(&[0, 1], &[0, 0], one) + &ConjPoly::monomial(&[2, 0], &[0, 1], one);
    let sys = NetworkSystem {
        adjacency: spec.adjacency.clone(),
        lambda: spec.sigma.iter().map(|s| spec.mu - s).collect(),
        omega: spec.omega.clone(),
        beta: vec![Complex64::new(-spec.mu, 0.0); n],
        coupling,
        alpha: spec.alpha,
        eps_res: DEFAULT_EPS_RES,
    };
    sys.validate()?;
    Ok(sys)
}
