use std::ops::{Add, Mul};

use num_complex::Complex64;

use super::Trajectory;
use crate::error::{Error, Result};

/// Scalar type an integrator can carry.
pub trait State:
    Copy + Default + Add<Output = Self> + Mul<f64, Output = Self> + Send + Sync + 'static
{
    fn finite(&self) -> bool;
    fn magnitude(&self) -> f64;
}

impl State for f64 {
    fn finite(&self) -> bool {
        self.is_finite()
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl State for Complex64 {
    fn finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Classical fourth-order Runge-Kutta with preallocated stages.
pub struct Rk4<T: State> {
    k1: Vec<T>,
    k2: Vec<T>,
    k3: Vec<T>,
    k4: Vec<T>,
    tmp: Vec<T>,
}

impl<T: State> Rk4<T> {
    pub fn new(n: usize) -> Self {
        Self {
            k1: vec![T::default(); n],
            k2: vec![T::default(); n],
            k3: vec![T::default(); n],
            k4: vec![T::default(); n],
            tmp: vec![T::default(); n],
        }
    }

    pub fn step<F>(&mut self, f: &mut F, t: f64, y: &mut [T], h: f64)
    where
        F: FnMut(f64, &[T], &mut [T]),
    {
        let n = y.len();
        f(t, y, &mut self.k1);
        for i in 0..n {
            self.tmp[i] = y[i] + self.k1[i] * (0.5 * h);
        }
        f(t + 0.5 * h, &self.tmp, &mut self.k2);
        for i in 0..n {
            self.tmp[i] = y[i] + self.k2[i] * (0.5 * h);
        }
        f(t + 0.5 * h, &self.tmp, &mut self.k3);
        for i in 0..n {
            self.tmp[i] = y[i] + self.k3[i] * h;
        }
        f(t + h, &self.tmp, &mut self.k4);
        for i in 0..n {
            y[i] =
                y[i] + (self.k1[i] + self.k2[i] * 2.0 + self.k3[i] * 2.0 + self.k4[i]) * (h / 6.0);
        }
    }
}

/// Fixed-step RK4 from `t = 0` to `t_end`, recording every `stride` steps
/// (the initial state included).
pub fn integrate_fixed<T, F>(
    mut f: F,
    y0: &[T],
    t_end: f64,
    dt: f64,
    stride: usize,
) -> Result<Trajectory<T>>
where
    T: State,
    F: FnMut(f64, &[T], &mut [T]),
{
    if !(dt > 0.0) || stride == 0 {
        return Err(Error::Config(
            "dt must be positive and stride at least 1".into(),
        ));
    }
    let steps = (t_end / dt).round() as usize;
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut rk = Rk4::new(n);
    let mut traj = Trajectory::with_capacity(n, dt * stride as f64, steps / stride + 1);
    traj.push(&y);
    for i in 0..steps {
        let t = i as f64 * dt;
        rk.step(&mut f, t, &mut y, dt);
        if y.iter().any(|v| !v.finite()) {
            return Err(Error::Divergence { t: t + dt });
        }
        if (i + 1) % stride == 0 {
            traj.push(&y);
        }
    }
    Ok(traj)
}

// Dormand-Prince 5(4) tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Settings of the adaptive integrator.
#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
    pub h_min: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            atol: 1e-9,
            rtol: 1e-9,
            h_min: 1e-12,
        }
    }
}

/// Adaptive Dormand-Prince 5(4) integration of a real system, sampled every
/// `sample_dt` (steps are shortened to land on sample times).
pub fn integrate_adaptive<F>(
    mut f: F,
    y0: &[f64],
    t_end: f64,
    sample_dt: f64,
    tol: Tolerance,
) -> Result<Trajectory<f64>>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y0.len();
    let samples = (t_end / sample_dt).round() as usize;
    let mut traj = Trajectory::with_capacity(n, sample_dt, samples + 1);
    let mut y = y0.to_vec();
    traj.push(&y);
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut y5 = vec![0.0; n];
    let mut t = 0.0;
    let mut h = sample_dt.min(0.1);
    f(t, &y, &mut k[0]);
    for s in 1..=samples {
        let target = s as f64 * sample_dt;
        while t < target - 1e-12 * target.max(1.0) {
            let last = h >= target - t;
            let step = if last { target - t } else { h };
            let stage = |k: &Vec<Vec<f64>>, coeffs: &[f64], tmp: &mut Vec<f64>| {
                for i in 0..n {
                    let mut acc = y[i];
                    for (j, c) in coeffs.iter().enumerate() {
                        acc += step * c * k[j][i];
                    }
                    tmp[i] = acc;
                }
            };
            stage(&k, &[A21], &mut tmp);
            f(t + C2 * step, &tmp, &mut k[1]);
            stage(&k, &[A31, A32], &mut tmp);
            f(t + C3 * step, &tmp, &mut k[2]);
            stage(&k, &[A41, A42, A43], &mut tmp);
            f(t + C4 * step, &tmp, &mut k[3]);
            stage(&k, &[A51, A52, A53, A54], &mut tmp);
            f(t + C5 * step, &tmp, &mut k[4]);
            stage(&k, &[A61, A62, A63, A64, A65], &mut tmp);
            f(t + step, &tmp, &mut k[5]);
            stage(&k, &[B1, 0.0, B3, B4, B5, B6], &mut y5);
            f(t + step, &y5, &mut k[6]);
            let mut err: f64 = 0.0;
            for i in 0..n {
                let e = step
                    * (E1 * k[0][i]
                        + E3 * k[2][i]
                        + E4 * k[3][i]
                        + E5 * k[4][i]
                        + E6 * k[5][i]
                        + E7 * k[6][i]);
                let sc = tol.atol + tol.rtol * y[i].abs().max(y5[i].abs());
                err = err.max((e / sc).abs());
            }
            if !err.is_finite() {
                return Err(Error::Divergence { t });
            }
            if err <= 1.0 {
                t += step;
                y.copy_from_slice(&y5);
                k.swap(0, 6);
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if !(last && err <= 1.0) {
                h = step * factor;
            }
            if h < tol.h_min {
                return Err(Error::StepUnderflow { t, h });
            }
        }
        traj.push(&y);
    }
    Ok(traj)
}
