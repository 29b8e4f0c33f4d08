//! Phase reduction of the emergent hypernetwork: polar substitution on the
//! limit cycle, first-order averaging, closed forms for the ring coupling
//! `(z + z^2) conj(w)`, and slow-phase vector fields.

mod meanfield;
mod oracle;

pub use meanfield::{oa_build, MeanFieldSpec};
pub use oracle::{averaged_phase_velocity, fourier_coefficient};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normalform::{Hypernetwork, NetworkSystem};

/// `theta_dot[target] += sin * sin(combo . theta) + cos * cos(combo . theta)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseTerm {
    pub target: usize,
    pub combo: Vec<i64>,
    pub sin: f64,
    pub cos: f64,
}

/// Averaged phase equations `theta_dot_k = omega_k + shift_k + sum of terms`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseModel {
    pub n: usize,
    pub omega: Vec<f64>,
    /// Constant frequency corrections from phase-neutral resonant monomials.
    pub shift: Vec<f64>,
    pub terms: Vec<PhaseTerm>,
}

fn dot(m: &[i64], x: &[f64]) -> f64 {
    m.iter().zip(x).map(|(&a, &b)| a as f64 * b).sum()
}

impl PhaseModel {
    pub fn uncoupled(omega: Vec<f64>) -> Self {
        Self {
            n: omega.len(),
            shift: vec![0.0; omega.len()],
            omega,
            terms: Vec::new(),
        }
    }

    pub fn eval(&self, theta: &[f64], out: &mut [f64]) {
        for k in 0..self.n {
            out[k] = self.omega[k] + self.shift[k];
        }
        for term in &self.terms {
            let psi = dot(&term.combo, theta);
            out[term.target] += term.sin * psi.sin() + term.cos * psi.cos();
        }
    }

    pub fn terms_of(&self, k: usize) -> impl Iterator<Item = &PhaseTerm> {
        self.terms.iter().filter(move |t| t.target == k)
    }
}

/// Freezes every amplitude on its uncoupled limit cycle and keeps the phase
/// dependence of each resonant monomial. A term `c m(u)` in `du_k/dt`
/// contributes `Im(c m(u) / u_k)` to `theta_dot_k`.
pub fn polar_reduce(hn: &Hypernetwork, sys: &NetworkSystem) -> Result<PhaseModel> {
    let n = sys.n();
    let radii: Vec<f64> = (0..n)
        .map(|k| sys.limit_cycle_radius(k))
        .collect::<Result<_>>()?;
    let scale = sys.alpha * sys.alpha;
    let amplitude = |m: &crate::polyalg::Monomial, k: usize| -> f64 {
        let mut a = 1.0 / radii[k];
        for j in 0..n {
            a *= radii[j].powi((m.s()[j] + m.t()[j]) as i32);
        }
        a
    };
    let mut model = PhaseModel::uncoupled(sys.omega.clone());
    for e in &hn.neutral {
        let c: Complex64 = e.field_coefficient * (scale * amplitude(&e.monomial, e.target));
        model.shift[e.target] += c.im;
    }
    for e in &hn.hyperedges {
        let c: Complex64 = e.field_coefficient * (scale * amplitude(&e.monomial, e.target));
        let slow = dot(&e.phase, &sys.omega);
        if slow.abs() > hn.eps_res {
            continue;
        }
        // Im(c e^{i psi}) = Re c sin psi + Im c cos psi
        model.terms.push(PhaseTerm {
            target: e.target,
            combo: e.phase.clone(),
            sin: c.re,
            cos: c.im,
        });
    }
    Ok(model)
}

/// Sine and cosine coefficients of `rho_pq` for `h = (z + z^2) conj(w)`:
/// the real and imaginary parts of `1 / (gamma_p + conj(gamma_q))` with
/// `gamma = r0^2 + i omega`.
pub fn rho(p: usize, q: usize, r0: f64, omega: &[f64]) -> (f64, f64) {
    let r2 = r0 * r0;
    let delta = omega[p] - omega[q];
    let den = 4.0 * r2 * r2 + delta * delta;
    (2.0 * r2 / den, -delta / den)
}

/// Sine and cosine coefficients `(-chi_pqr, upsilon_pqr)` of `sigma_pqr`.
pub fn sigma(p: usize, q: usize, r: usize, r0: f64, omega: &[f64]) -> (f64, f64) {
    let r2 = r0 * r0;
    let r4 = r2 * r2;
    let d_pq = omega[p] - omega[q];
    let d_pr = omega[p] - omega[r];
    let (wq, wr) = (omega[q], omega[r]);
    let chi = r2
        * (4.0 / (4.0 * r4 + d_pq * d_pq)
            + 4.0 / (4.0 * r4 + d_pr * d_pr)
            + 1.0 / (r4 + wq * wq)
            + 1.0 / (r4 + wr * wr));
    let upsilon = -2.0 * d_pq / (4.0 * r4 + d_pq * d_pq) - 2.0 * d_pr / (4.0 * r4 + d_pr * d_pr)
        + wq / (r4 + wq * wq)
        + wr / (r4 + wr * wr);
    (-chi, upsilon)
}

/// `phi_dot_i = detuning_i + sum_j a_ij cos(phi_j) + b_ij sin(phi_j)` with
/// `phi_i = combos[i] . theta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlowPhaseSystem {
    pub combos: Vec<Vec<i64>>,
    pub detuning: Vec<f64>,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
}

impl SlowPhaseSystem {
    pub fn new(
        combos: Vec<Vec<i64>>,
        detuning: Vec<f64>,
        a: Vec<Vec<f64>>,
        b: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let r = combos.len();
        if detuning.len() != r
            || a.len() != r
            || b.len() != r
            || a.iter().chain(&b).any(|row| row.len() != r)
        {
            return Err(Error::Dimension {
                expected: r,
                found: detuning.len(),
            });
        }
        Ok(Self {
            combos,
            detuning,
            a,
            b,
        })
    }

    pub fn dim(&self) -> usize {
        self.combos.len()
    }

    pub fn eval(&self, phi: &[f64], out: &mut [f64]) {
        for i in 0..self.dim() {
            let mut v = self.detuning[i];
            for (j, p) in phi.iter().enumerate() {
                v += self.a[i][j] * p.cos() + self.b[i][j] * p.sin();
            }
            out[i] = v;
        }
    }

    /// Parameters flattened as `[detuning_i, a_i1, b_i1, a_i2, b_i2, ...]`
    /// per row, the order used by the least-squares fit.
    pub fn row_parameters(&self, i: usize) -> Vec<f64> {
        let mut out = vec![self.detuning[i]];
        for j in 0..self.dim() {
            out.push(self.a[i][j]);
            out.push(self.b[i][j]);
        }
        out
    }
}

/// Projects the per-node phase model onto slow phases by the chain rule.
/// Terms whose combination is not `+-` one of the slow phases are reported
/// and dropped.
pub fn slow_phase_field(pm: &PhaseModel, combos: &[Vec<i64>]) -> Result<SlowPhaseSystem> {
    let r = combos.len();
    for c in combos {
        if c.len() != pm.n {
            return Err(Error::Index {
                index: c.len(),
                len: pm.n,
            });
        }
    }
    let freq: Vec<f64> = pm.omega.iter().zip(&pm.shift).map(|(w, s)| w + s).collect();
    let detuning: Vec<f64> = combos.iter().map(|c| dot(c, &freq)).collect();
    let mut a = vec![vec![0.0; r]; r];
    let mut b = vec![vec![0.0; r]; r];
    for term in &pm.terms {
        let neg: Vec<i64> = term.combo.iter().map(|x| -x).collect();
        let found = combos.iter().enumerate().find_map(|(j, c)| {
            if *c == term.combo {
                Some((j, 1.0))
            } else if *c == neg {
                Some((j, -1.0))
            } else {
                None
            }
        });
        let Some((j, sign)) = found else {
            log::warn!(
                "node {} term with combination {:?} is not one of the slow phases; dropped",
                term.target + 1,
                term.combo
            );
            continue;
        };
        for (i, c) in combos.iter().enumerate() {
            let weight = c[term.target] as f64;
            if weight == 0.0 {
                continue;
            }
            a[i][j] += weight * term.cos;
            b[i][j] += weight * sign * term.sin;
        }
    }
    SlowPhaseSystem::new(combos.to_vec(), detuning, a, b)
}
