use serde::{Deserialize, Serialize};

use super::{RealTrajectory, Trajectory};
use crate::error::{Error, Result};
use crate::presets::ring_adjacency;

/// Delay-coupled integrate-and-fire relaxation oscillators.
///
/// While charging (`p = 1`) `v` grows as `v / F_k` until it reaches 1, then
/// discharges (`p = 0`) as `-B v / F_k` down to the threshold `A`. Charging
/// nodes feel `K sum_l A_kl (vt_k + vt_k^2) vt_l(t - tau)` with `vt = v - offset`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IfConfig {
    pub f: Vec<f64>,
    pub threshold: f64,
    pub b: f64,
    pub k: f64,
    pub tau: f64,
    pub offset: f64,
    pub adjacency: Vec<Vec<f64>>,
    pub v0: Vec<f64>,
    /// Relaxation time of `p` after a switch; zero switches instantly.
    pub switch_time: f64,
}

impl IfConfig {
    pub fn reference() -> Self {
        Self {
            f: vec![4.950, 1.955, 3.177, 1.970],
            threshold: 0.36,
            b: 3.333,
            k: 0.234,
            tau: 1.65,
            offset: 0.626,
            adjacency: ring_adjacency(4),
            v0: vec![0.4, 0.55, 0.7, 0.85],
            switch_time: 0.0,
        }
    }

    pub fn uncoupled(&self) -> Self {
        Self {
            k: 0.0,
            ..self.clone()
        }
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    /// Free-running period `F (1 + 1/B) ln(1/A)`.
    pub fn natural_period(&self, k: usize) -> f64 {
        self.f[k] * (1.0 + 1.0 / self.b) * (1.0 / self.threshold).ln()
    }

    fn check(&self, dt: f64) -> Result<usize> {
        let n = self.n();
        for len in [self.v0.len(), self.adjacency.len()] {
            if len != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: len,
                });
            }
        }
        if !(0.0 < self.threshold && self.threshold < 1.0)
            || self.b <= 0.0
            || self.f.iter().any(|&f| f <= 0.0)
        {
            return Err(Error::Config(
                "IF ring needs 0 < A < 1, B > 0 and F_k > 0".into(),
            ));
        }
        let ratio = self.tau / dt;
        if self.tau < 0.0 || (ratio - ratio.round()).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "dt = {dt} must divide the delay tau = {}",
                self.tau
            )));
        }
        Ok(ratio.round() as usize)
    }
}

/// Fixed-step RK4 with the delayed state read from a ring buffer (linear
/// interpolation at half steps). Returns the membrane variables `v`.
pub fn integrate_if_ring(
    cfg: &IfConfig,
    t_end: f64,
    dt: f64,
    stride: usize,
) -> Result<RealTrajectory> {
    let delay = cfg.check(dt)?;
    let n = cfg.n();
    let cap = delay + 2;
    let mut buf = vec![cfg.v0.clone(); cap];
    let mut v = cfg.v0.clone();
    let mut p = vec![1.0; n];
    let mut charging = vec![true; n];
    let relax = if cfg.switch_time > 0.0 {
        1.0 - (-dt / cfg.switch_time).exp()
    } else {
        1.0
    };

    // delayed value of node l at step position s (fractional), relative to step i
    let delayed = |buf: &Vec<Vec<f64>>, i: usize, s: f64, l: usize| -> f64 {
        if s < 0.0 {
            return cfg.v0[l];
        }
        let lo = s.floor() as usize;
        let frac = s - lo as f64;
        let a = buf[lo % cap][l];
        if frac == 0.0 || lo >= i {
            a
        } else {
            a + frac * (buf[(lo + 1) % cap][l] - a)
        }
    };

    let rhs = |x: &[f64], lag: &[f64], p: &[f64], out: &mut [f64]| {
        for k in 0..n {
            let drive = (p[k] * x[k] - (1.0 - p[k]) * x[k] * cfg.b) / cfg.f[k];
            let mut coupling = 0.0;
            if cfg.k != 0.0 && p[k] > 0.0 {
                let vk = x[k] - cfg.offset;
                for l in 0..n {
                    if cfg.adjacency[k][l] != 0.0 {
                        coupling += cfg.adjacency[k][l] * (vk + vk * vk) * (lag[l] - cfg.offset);
                    }
                }
            }
            out[k] = drive + p[k] * cfg.k * coupling;
        }
    };

    let steps = (t_end / dt).round() as usize;
    let stride = stride.max(1);
    let mut traj = Trajectory::with_capacity(n, dt * stride as f64, steps / stride + 1);
    traj.push(&v);
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    let (mut lag0, mut lag_half, mut lag1) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for i in 0..steps {
        let s0 = i as f64 - delay as f64;
        for l in 0..n {
            lag0[l] = delayed(&buf, i, s0, l);
            lag_half[l] = delayed(&buf, i, s0 + 0.5, l);
            lag1[l] = delayed(&buf, i, s0 + 1.0, l);
        }
        rhs(&v, &lag0, &p, &mut k1);
        for j in 0..n {
            tmp[j] = v[j] + 0.5 * dt * k1[j];
        }
        rhs(&tmp, &lag_half, &p, &mut k2);
        for j in 0..n {
            tmp[j] = v[j] + 0.5 * dt * k2[j];
        }
        rhs(&tmp, &lag_half, &p, &mut k3);
        for j in 0..n {
            tmp[j] = v[j] + dt * k3[j];
        }
        rhs(&tmp, &lag1, &p, &mut k4);
        for j in 0..n {
            v[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            if charging[j] && v[j] >= 1.0 {
                charging[j] = false;
            } else if !charging[j] && v[j] <= cfg.threshold {
                charging[j] = true;
            }
            let target = if charging[j] { 1.0 } else { 0.0 };
            p[j] += relax * (target - p[j]);
            if !(0.0..=2.0).contains(&v[j]) {
                return Err(Error::Divergence {
                    t: (i + 1) as f64 * dt,
                });
            }
        }
        buf[(i + 1) % cap].copy_from_slice(&v);
        if (i + 1) % stride == 0 {
            traj.push(&v);
        }
    }
    Ok(traj)
}
