use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::network::integrate_network;
use super::trajectory::unwrap_phase;
use super::RealTrajectory;
use crate::error::{Error, Result};
use crate::presets;

/// Worker count: `HNF_THREADS` if set to a positive integer, otherwise the
/// number of available cores.
pub fn thread_count() -> usize {
    std::env::var("HNF_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

fn wrap(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

/// Mean of `|phi|` for the unwrapped difference `phi = theta_i - theta_j`,
/// started on the branch `(-pi, pi]`. Drifting phases give an error that grows
/// with the run length; locked phases stay below `pi` in magnitude.
pub fn phase_locking_error(phases: &RealTrajectory, i: usize, j: usize) -> f64 {
    if phases.is_empty() {
        return f64::NAN;
    }
    let diff: Vec<f64> = phases.samples.iter().map(|s| wrap(s[i] - s[j])).collect();
    let phi = unwrap_phase(&diff);
    phi.iter().map(|x| x.abs()).sum::<f64>() / phi.len() as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TongueSweep {
    pub deltas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub t_end: f64,
    pub transient: f64,
    pub dt: f64,
    /// Samples used for the error are taken every `stride` steps.
    pub stride: usize,
    /// A cell is locked when `E < lock_ratio * E(alpha = 0)`.
    pub lock_ratio: f64,
}

impl TongueSweep {
    fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
        (0..points)
            .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
            .collect()
    }

    /// `delta` in [-0.2, 0.2] (41 points), `alpha` in [0, 0.5] (21 points),
    /// 5000 time units per cell.
    pub fn desk() -> Self {
        Self {
            deltas: Self::grid(-0.2, 0.2, 41),
            alphas: Self::grid(0.0, 0.5, 21),
            t_end: 5000.0,
            transient: 1000.0,
            dt: 0.05,
            stride: 10,
            lock_ratio: 0.1,
        }
    }

    /// Same grid with 50000 time units per cell.
    pub fn full_scale() -> Self {
        Self {
            t_end: 50000.0,
            transient: 5000.0,
            ..Self::desk()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TongueCell {
    pub delta: f64,
    pub alpha: f64,
    pub error: f64,
    pub free_error: f64,
    pub locked: bool,
}

fn cell_error(delta: f64, alpha: f64, sweep: &TongueSweep) -> Result<f64> {
    let sys = presets::tongue(delta, alpha);
    let z0: Vec<Complex64> = (0..4)
        .map(|k| Complex64::from_polar(1.0, 1.3 * k as f64))
        .collect();
    let traj = integrate_network(&sys, &z0, sweep.t_end, sweep.dt, sweep.stride)?;
    Ok(phase_locking_error(
        &traj.after(sweep.transient).phases(),
        0,
        1,
    ))
}

/// Runs every `(delta, alpha)` cell of the tongue ring in parallel.
pub fn sweep_sync_tongue(sweep: &TongueSweep) -> Result<Vec<TongueCell>> {
    if sweep.transient >= sweep.t_end {
        return Err(Error::Config(
            "transient must be shorter than the run".into(),
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| {
        let free: Vec<f64> = sweep
            .deltas
            .par_iter()
            .map(|&d| cell_error(d, 0.0, sweep))
            .collect::<Result<_>>()?;
        let cells: Vec<(usize, f64)> = sweep
            .deltas
            .iter()
            .enumerate()
            .flat_map(|(i, _)| sweep.alphas.iter().map(move |&a| (i, a)))
            .collect();
        cells
            .par_iter()
            .map(|&(i, alpha)| {
                let delta = sweep.deltas[i];
                let error = if alpha == 0.0 {
                    free[i]
                } else {
                    cell_error(delta, alpha, sweep)?
                };
                Ok(TongueCell {
                    delta,
                    alpha,
                    error,
                    free_error: free[i],
                    locked: error < sweep.lock_ratio * free[i],
                })
            })
            .collect()
    })
}

/// Smallest locked `alpha` for each `delta != 0` (cells without any locked
/// `alpha` are skipped).
pub fn locking_boundary(cells: &[TongueCell]) -> Vec<(f64, f64)> {
    let mut deltas: Vec<f64> = cells
        .iter()
        .map(|c| c.delta)
        .filter(|d| *d != 0.0)
        .collect();
    deltas.sort_by(|a, b| a.total_cmp(b));
    deltas.dedup();
    deltas
        .into_iter()
        .filter_map(|d| {
            cells
                .iter()
                .filter(|c| c.delta == d && c.locked)
                .map(|c| c.alpha)
                .min_by(|a, b| a.total_cmp(b))
                .map(|a| (d, a))
        })
        .collect()
}

/// Least-squares fit of `alpha_c = c sqrt(|delta|)`; returns `(c, R^2)`.
pub fn fit_sqrt_law(boundary: &[(f64, f64)]) -> (f64, f64) {
    let x: Vec<f64> = boundary.iter().map(|(d, _)| d.abs().sqrt()).collect();
    let y: Vec<f64> = boundary.iter().map(|(_, a)| *a).collect();
    let c =
        x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() / x.iter().map(|a| a * a).sum::<f64>();
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_res: f64 = x.iter().zip(&y).map(|(a, b)| (b - c * a).powi(2)).sum();
    let ss_tot: f64 = y.iter().map(|b| (b - mean).powi(2)).sum();
    (c, 1.0 - ss_res / ss_tot)
}
