use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::integrate::Rk4;
use super::{ComplexTrajectory, Trajectory};
use crate::error::{Error, Result};
use crate::normalform::NetworkSystem;
use crate::phasered::MeanFieldSpec;
use crate::polyalg::{ConjPoly, DEFAULT_EPS_RES};

/// Kuramoto populations behind a [`MeanFieldSpec`]. Oscillator `j` of
/// population `k` obeys
/// `psi_dot = omega_j + Im(F_k e^{-i psi})`, `F_k = 2 mu Z_k + 2 alpha sum_l A_kl Z_l`,
/// with Lorentzian `omega_j` centred on `Omega_k` with half-width `sigma_k`
/// (stratified, so the sample quantiles track the density closely).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub spec: MeanFieldSpec,
    /// Oscillators per population.
    pub m: usize,
    pub seed: u64,
    /// Initial order parameters; phases are drawn from the matching
    /// Poisson kernel so the ensemble starts on the Ott-Antonsen manifold.
    pub z0: Vec<Complex64>,
}

pub struct EnsembleRun {
    /// Order parameter of each population.
    pub order: ComplexTrajectory,
    /// Empirical order parameters of the drawn initial phases.
    pub z0_sampled: Vec<Complex64>,
}

/// `n` order parameters of modulus `r` with uniform random phases. Uses its
/// own ChaCha stream, so it never repeats the draws of the ensemble itself.
pub fn initial_order(seed: u64, n: usize, r: f64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    (0..n)
        .map(|_| Complex64::from_polar(r, rng.random_range(0.0..2.0 * PI)))
        .collect()
}

impl EnsembleConfig {
    /// Reference ensemble with `M = 5000`; the initial order parameters have
    /// modulus 0.3 and phases drawn from `seed`.
    pub fn reference(seed: u64) -> Self {
        Self {
            spec: MeanFieldSpec::reference(),
            m: 5000,
            seed,
            z0: initial_order(seed, 4, 0.3),
        }
    }

    /// Exact Ott-Antonsen reduction of this ensemble:
    /// `z_dot = (i Omega - sigma + mu) z - mu |z|^2 z + alpha sum_l A_kl (z_l - conj(z_l) z^2)`.
    pub fn oa_system(&self) -> Result<NetworkSystem> {
        let mut sys = self.spec.build()?;
        let one = Complex64::new(1.0, 0.0);
        sys.coupling =
            &ConjPoly::monomial(&[0, 1], &[0, 0], one) - &ConjPoly::monomial(&[2, 0], &[0, 1], one);
        sys.eps_res = DEFAULT_EPS_RES;
        sys.validate()?;
        Ok(sys)
    }

    fn check(&self) -> Result<()> {
        self.spec.radii()?;
        if self.z0.len() != self.spec.n() {
            return Err(Error::Dimension {
                expected: self.spec.n(),
                found: self.z0.len(),
            });
        }
        if self.m == 0 || self.z0.iter().any(|z| z.norm() >= 1.0) {
            return Err(Error::Config("ensemble needs m >= 1 and |z0| < 1".into()));
        }
        Ok(())
    }
}

/// Mean of `e^{i psi}`.
pub fn order_parameter(psi: &[f64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &p in psi {
        let (s, c) = p.sin_cos();
        acc += Complex64::new(c, s);
    }
    acc / psi.len() as f64
}

/// Stratified Lorentzian sample: draw `j` is uniform within the `j`-th of
/// `m` equal-probability bins.
fn lorentzian<R: Rng>(rng: &mut R, centre: f64, width: f64, m: usize) -> Vec<f64> {
    (0..m)
        .map(|j| {
            let u = (j as f64 + rng.random::<f64>()) / m as f64;
            centre + width * (PI * (u - 0.5)).tan()
        })
        .collect()
}

/// Draws from the wrapped Cauchy density whose first moment is `z`.
fn poisson_kernel<R: Rng>(rng: &mut R, z: Complex64) -> f64 {
    let (rho, theta) = (z.norm(), z.arg());
    let u: f64 = rng.random();
    theta + 2.0 * (((1.0 - rho) / (1.0 + rho)) * (PI * (u - 0.5)).tan()).atan()
}

pub fn integrate_microscopic(
    cfg: &EnsembleConfig,
    t_end: f64,
    dt: f64,
    stride: usize,
) -> Result<EnsembleRun> {
    cfg.check()?;
    let spec = &cfg.spec;
    let (n, m) = (spec.n(), cfg.m);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut omega = Vec::with_capacity(n * m);
    let mut psi = Vec::with_capacity(n * m);
    for k in 0..n {
        omega.extend(lorentzian(&mut rng, spec.omega[k], spec.sigma[k], m));
        for _ in 0..m {
            psi.push(poisson_kernel(&mut rng, cfg.z0[k]));
        }
    }
    let z0_sampled: Vec<Complex64> = (0..n)
        .map(|k| order_parameter(&psi[k * m..(k + 1) * m]))
        .collect();

    let mut trig = vec![(0.0, 0.0); n * m];
    let mut rhs = |_: f64, x: &[f64], out: &mut [f64]| {
        let mut z = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..n {
            for j in k * m..(k + 1) * m {
                let (s, c) = x[j].sin_cos();
                trig[j] = (s, c);
                z[k] += Complex64::new(c, s);
            }
            z[k] /= m as f64;
        }
        for k in 0..n {
            let mut f = z[k] * (2.0 * spec.mu);
            for l in 0..n {
                f += z[l] * (2.0 * spec.alpha * spec.adjacency[k][l]);
            }
            // Im(F e^{-i psi})
            for j in k * m..(k + 1) * m {
                let (s, c) = trig[j];
                out[j] = omega[j] + f.im * c - f.re * s;
            }
        }
    };

    let steps = (t_end / dt).round() as usize;
    let mut rk = Rk4::new(n * m);
    let mut order = Trajectory::with_capacity(n, dt * stride as f64, steps / stride.max(1) + 1);
    let sample = |psi: &[f64]| -> Vec<Complex64> {
        (0..n)
            .map(|k| order_parameter(&psi[k * m..(k + 1) * m]))
            .collect()
    };
    order.push(&sample(&psi));
    for i in 0..steps {
        rk.step(&mut rhs, i as f64 * dt, &mut psi, dt);
        if (i + 1) % stride.max(1) == 0 {
            let z = sample(&psi);
            if z.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                return Err(Error::Divergence {
                    t: (i + 1) as f64 * dt,
                });
            }
            order.push(&z);
        }
    }
    Ok(EnsembleRun { order, z0_sampled })
}
