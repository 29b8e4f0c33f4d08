use std::f64::consts::PI;

use log::warn;
use serde::{Deserialize, Serialize};

use super::filter::{central_difference, savitzky_golay};
use super::library::{build_library_from, Feature};
use super::regress::{ols, FitResult};
use crate::error::{Error, Result};
use crate::phasered::SlowPhaseSystem;
use crate::simkit::{integrate_slow_phase, Tolerance};

/// Minimizes a unimodal function on `[lo, hi]`.
pub fn golden_section<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Fitted slow-phase field with its best simulated reproduction of the data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SlowPhaseFit {
    pub system: SlowPhaseSystem,
    pub fits: Vec<FitResult>,
    pub initial: Vec<f64>,
    /// `predicted[j][i]` is slow phase `j` at sample `i` of the data.
    pub predicted: Vec<Vec<f64>>,
    pub mse: f64,
}

/// Settings of [`fit_slow_phase`].
#[derive(Clone, Copy, Debug)]
pub struct SlowFitOptions {
    /// Savitzky-Golay window (samples, odd) applied to the phase velocities;
    /// 1 disables smoothing.
    pub smoothing_window: usize,
    /// Coordinate sweeps of the golden-section search over the initial state.
    pub sweeps: usize,
}

impl Default for SlowFitOptions {
    fn default() -> Self {
        Self {
            smoothing_window: 1,
            sweeps: 3,
        }
    }
}

/// Least squares for `phi_dot_i = nu_i + sum_j a_ij cos(phi_j) + b_ij sin(phi_j)`
/// on the velocities of `phi` (channel-major, sampled every `dt`), then a
/// golden-section search over the initial condition that minimizes the
/// squared distance between the simulated and measured slow phases.
pub fn fit_slow_phase(
    phi: &[Vec<f64>],
    dt: f64,
    combos: &[Vec<i64>],
    opts: &SlowFitOptions,
) -> Result<SlowPhaseFit> {
    let r = phi.len();
    if combos.len() != r {
        return Err(Error::Dimension {
            expected: r,
            found: combos.len(),
        });
    }
    let len = phi.first().map_or(0, Vec::len);
    if len < 4 * (2 * r + 1) {
        return Err(Error::Rank(format!(
            "{len} samples are too few for the slow-phase fit"
        )));
    }
    let units: Vec<Vec<i64>> = (0..r)
        .map(|j| (0..r).map(|i| i64::from(i == j)).collect())
        .collect();
    let lib = build_library_from(phi, dt, &units, 0)?;
    let mut fits = Vec::with_capacity(r);
    let mut detuning = vec![0.0; r];
    let mut a = vec![vec![0.0; r]; r];
    let mut b = vec![vec![0.0; r]; r];
    for i in 0..r {
        let mut v = central_difference(&phi[i], dt);
        if opts.smoothing_window > 1 {
            v = savitzky_golay(&v, opts.smoothing_window, 1)?;
        }
        let fit = ols(&lib, &v)?;
        detuning[i] = fit.coefficient(&Feature::Constant);
        for j in 0..r {
            a[i][j] = fit.coefficient(&Feature::Cos(units[j].clone()));
            b[i][j] = fit.coefficient(&Feature::Sin(units[j].clone()));
        }
        fits.push(fit);
    }
    let system = SlowPhaseSystem::new(combos.to_vec(), detuning, a, b)?;

    let t_end = (len - 1) as f64 * dt;
    let tol = Tolerance {
        atol: 1e-8,
        rtol: 1e-8,
        ..Tolerance::default()
    };
    let cost = |x0: &[f64]| -> f64 {
        match integrate_slow_phase(&system, x0, t_end, dt, tol) {
            Ok(tr) => {
                let mut acc = 0.0;
                for (i, s) in tr.samples.iter().enumerate().take(len) {
                    for j in 0..r {
                        acc += (s[j] - phi[j][i]).powi(2);
                    }
                }
                acc / (len * r) as f64
            }
            Err(_) => f64::INFINITY,
        }
    };
    let mut x0: Vec<f64> = phi.iter().map(|p| p[0]).collect();
    let mut best = cost(&x0);
    for _ in 0..opts.sweeps {
        for j in 0..r {
            let centre = x0[j];
            let (xj, fj) = golden_section(
                |v| {
                    let mut trial = x0.clone();
                    trial[j] = v;
                    cost(&trial)
                },
                centre - PI,
                centre + PI,
                1e-6,
            );
            if fj < best {
                best = fj;
                x0[j] = xj;
            }
        }
    }
    if !best.is_finite() {
        warn!("fit_slow_phase: no initial condition produced a finite prediction");
    }
    let tr = integrate_slow_phase(&system, &x0, t_end, dt, tol)?;
    let predicted = (0..r)
        .map(|j| tr.samples.iter().take(len).map(|s| s[j]).collect())
        .collect();
    Ok(SlowPhaseFit {
        system,
        fits,
        initial: x0,
        predicted,
        mse: best,
    })
}

/// Prediction error per cycle of the measured slow phase: the data are cut
/// wherever they have advanced by another `2 pi` (in either direction), and
/// each piece reports the RMS of `predicted - data` divided by `2 pi`. A
/// series that never completes a cycle is treated as one piece.
pub fn per_cycle_error(data: &[f64], predicted: &[f64]) -> Vec<f64> {
    let n = data.len().min(predicted.len());
    if n == 0 {
        return Vec::new();
    }
    let mut cuts = vec![0];
    let mut anchor = data[0];
    for i in 1..n {
        if (data[i] - anchor).abs() >= 2.0 * PI {
            cuts.push(i);
            anchor = data[i];
        }
    }
    if *cuts.last().unwrap() < n - 1 && cuts.len() == 1 {
        cuts.push(n);
    } else if *cuts.last().unwrap() != n {
        // fold a trailing partial cycle into the last full one
        let last = cuts.len() - 1;
        if cuts.len() > 2 {
            cuts[last] = n;
        } else {
            cuts.push(n);
        }
    }
    cuts.windows(2)
        .map(|w| {
            let (s, e) = (w[0], w[1]);
            let ms = (s..e)
                .map(|i| (predicted[i] - data[i]).powi(2))
                .sum::<f64>()
                / (e - s) as f64;
            ms.sqrt() / (2.0 * PI)
        })
        .collect()
}

/// `H_j^k = sqrt(C^2 + D^2)` for every `sin/cos` pair of combination `m` in
/// a fit.
pub fn triplet_amplitude(fit: &FitResult, m: &[i64]) -> f64 {
    let c = fit.coefficient(&Feature::Sin(m.to_vec()));
    let d = fit.coefficient(&Feature::Cos(m.to_vec()));
    c.hypot(d)
}

/// Amplitudes of every combination in `combos`, one row per fit (node).
pub fn triplet_amplitudes(fits: &[FitResult], combos: &[Vec<i64>]) -> Vec<Vec<f64>> {
    fits.iter()
        .map(|f| combos.iter().map(|m| triplet_amplitude(f, m)).collect())
        .collect()
}
