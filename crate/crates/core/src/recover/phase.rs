use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simkit::{unwrap_phase, ComplexTrajectory, RealTrajectory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseSource {
    Polar,
    PeakInterpolated,
}

/// Unwrapped phases of several channels on a common uniform grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSeries {
    pub dt: f64,
    /// Time of the first sample.
    pub t0: f64,
    /// `phases[k][i]` is channel `k` at `t0 + i dt`.
    pub phases: Vec<Vec<f64>>,
    pub source: PhaseSource,
    /// Frequencies removed by [`detrend`], if any.
    pub omega: Option<Vec<f64>>,
}

impl PhaseSeries {
    pub fn n(&self) -> usize {
        self.phases.len()
    }

    pub fn len(&self) -> usize {
        self.phases.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }

    /// Integer combination `sum_k m_k phase_k` at every sample.
    pub fn combination(&self, m: &[i64]) -> Result<Vec<f64>> {
        if m.len() != self.n() {
            return Err(Error::Dimension {
                expected: self.n(),
                found: m.len(),
            });
        }
        Ok((0..self.len())
            .map(|i| {
                m.iter()
                    .zip(&self.phases)
                    .map(|(&c, p)| c as f64 * p[i])
                    .sum()
            })
            .collect())
    }

    /// Drops every sample before `t_cut` (absolute time).
    pub fn after(&self, t_cut: f64) -> Self {
        let skip = (((t_cut - self.t0) / self.dt).round().max(0.0) as usize).min(self.len());
        Self {
            t0: self.time(skip),
            phases: self.phases.iter().map(|p| p[skip..].to_vec()).collect(),
            ..self.clone()
        }
    }
}

/// Argument of each complex sample, unwrapped along time.
pub fn extract_phase_polar(traj: &ComplexTrajectory) -> Result<PhaseSeries> {
    for (i, s) in traj.samples.iter().enumerate() {
        for (k, z) in s.iter().enumerate() {
            if z.norm() < 1e-9 {
                return Err(Error::DegenerateAmplitude {
                    channel: k,
                    sample: i,
                    amplitude: z.norm(),
                });
            }
        }
    }
    let phases = (0..traj.channels)
        .map(|k| unwrap_phase(&traj.samples.iter().map(|s| s[k].arg()).collect::<Vec<_>>()))
        .collect();
    Ok(PhaseSeries {
        dt: traj.dt,
        t0: 0.0,
        phases,
        source: PhaseSource::Polar,
        omega: None,
    })
}

/// Peak times (parabolic refinement) of one channel. A peak is a local
/// maximum that rises at least `floor` above the lowest value since the
/// previous accepted peak.
fn peak_times(x: &[f64], dt: f64, floor: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut low = f64::INFINITY;
    for i in 1..x.len().saturating_sub(1) {
        low = low.min(x[i]);
        if x[i] > x[i - 1] && x[i] >= x[i + 1] && x[i] - low >= floor {
            let (a, b, c) = (x[i - 1], x[i], x[i + 1]);
            let denom = a - 2.0 * b + c;
            let shift = if denom.abs() > 1e-300 {
                0.5 * (a - c) / denom
            } else {
                0.0
            };
            out.push((i as f64 + shift.clamp(-0.5, 0.5)) * dt);
            low = f64::INFINITY;
        }
    }
    out
}

/// Phase that advances by `2 pi` from one peak to the next, linear in
/// between. The result covers the window where every channel lies between
/// two of its peaks.
pub fn extract_phase_peaks(series: &RealTrajectory) -> Result<PhaseSeries> {
    const MIN_PEAKS: usize = 3;
    let mut peaks = Vec::with_capacity(series.channels);
    for k in 0..series.channels {
        let x = series.channel(k);
        let (lo, hi) = x
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                (a.min(v), b.max(v))
            });
        let floor = if hi > lo {
            0.1 * (hi - lo)
        } else {
            f64::INFINITY
        };
        let p = peak_times(&x, series.dt, floor);
        if p.len() < MIN_PEAKS {
            return Err(Error::InsufficientCycles {
                channel: k,
                found: p.len(),
                needed: MIN_PEAKS,
            });
        }
        peaks.push(p);
    }
    let start = peaks.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    let end = peaks
        .iter()
        .map(|p| *p.last().unwrap())
        .fold(f64::INFINITY, f64::min);
    if end <= start {
        return Err(Error::Config(
            "peak windows of the channels do not overlap".into(),
        ));
    }
    let i0 = (start / series.dt).ceil() as usize;
    let i1 = (end / series.dt).floor() as usize;
    let phases = peaks
        .iter()
        .map(|p| {
            let mut j = 0;
            (i0..=i1)
                .map(|i| {
                    let t = i as f64 * series.dt;
                    while j + 2 < p.len() && p[j + 1] <= t {
                        j += 1;
                    }
                    2.0 * PI * (j as f64 + (t - p[j]) / (p[j + 1] - p[j]))
                })
                .collect()
        })
        .collect();
    Ok(PhaseSeries {
        dt: series.dt,
        t0: i0 as f64 * series.dt,
        phases,
        source: PhaseSource::PeakInterpolated,
        omega: None,
    })
}

/// `vartheta_k = theta_k - Omega_k t`.
pub fn detrend(ps: &PhaseSeries, omega: &[f64]) -> Result<PhaseSeries> {
    if omega.len() != ps.n() {
        return Err(Error::Dimension {
            expected: ps.n(),
            found: omega.len(),
        });
    }
    let phases = ps
        .phases
        .iter()
        .zip(omega)
        .map(|(p, w)| {
            p.iter()
                .enumerate()
                .map(|(i, x)| x - w * ps.time(i))
                .collect()
        })
        .collect();
    Ok(PhaseSeries {
        phases,
        omega: Some(omega.to_vec()),
        ..ps.clone()
    })
}

/// Least-squares slope of each channel against time.
pub fn fit_slopes(ps: &PhaseSeries) -> Vec<f64> {
    let t = ps.times();
    let tm = t.iter().sum::<f64>() / t.len() as f64;
    let stt: f64 = t.iter().map(|x| (x - tm).powi(2)).sum();
    ps.phases
        .iter()
        .map(|p| {
            let pm = p.iter().sum::<f64>() / p.len() as f64;
            t.iter()
                .zip(p)
                .map(|(a, b)| (a - tm) * (b - pm))
                .sum::<f64>()
                / stt
        })
        .collect()
}

/// Slopes projected onto `{Omega : c . Omega = 0 for every constraint c}`.
pub fn estimate_resonant_frequencies(
    ps: &PhaseSeries,
    constraints: &[Vec<i64>],
) -> Result<Vec<f64>> {
    let slopes = fit_slopes(ps);
    if constraints.is_empty() {
        return Ok(slopes);
    }
    let n = ps.n();
    for c in constraints {
        if c.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: c.len(),
            });
        }
    }
    let c = DMatrix::from_fn(constraints.len(), n, |i, j| constraints[i][j] as f64);
    let cct = &c * c.transpose();
    let svd = cct.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if svd
        .singular_values
        .iter()
        .any(|&s| s <= 1e-12 * smax.max(1.0))
    {
        return Err(Error::Rank(
            "resonance constraints are linearly dependent".into(),
        ));
    }
    let x = DVector::from_vec(slopes);
    let lambda = cct
        .lu()
        .solve(&(&c * &x))
        .ok_or_else(|| Error::Rank("resonance constraints are singular".into()))?;
    let projected = &x - c.transpose() * lambda;
    Ok(projected.iter().copied().collect())
}
