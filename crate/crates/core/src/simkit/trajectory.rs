use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniformly sampled multichannel time series starting at `t = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<T> {
    pub dt: f64,
    /// `samples[i][k]` is channel `k` at time `i * dt`.
    pub samples: Vec<Vec<T>>,
    pub channels: usize,
}

pub type ComplexTrajectory = Trajectory<Complex64>;
pub type RealTrajectory = Trajectory<f64>;

impl<T: Clone> Trajectory<T> {
    pub fn with_capacity(channels: usize, dt: f64, capacity: usize) -> Self {
        Self {
            dt,
            samples: Vec::with_capacity(capacity),
            channels,
        }
    }

    pub fn push(&mut self, sample: &[T]) {
        debug_assert_eq!(sample.len(), self.channels);
        self.samples.push(sample.to_vec());
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }

    pub fn channel(&self, k: usize) -> Vec<T> {
        self.samples.iter().map(|s| s[k].clone()).collect()
    }

    pub fn last(&self) -> Option<&[T]> {
        self.samples.last().map(|s| s.as_slice())
    }

    /// Drops every sample before `t_cut`; time restarts at zero.
    pub fn after(&self, t_cut: f64) -> Self {
        let skip = ((t_cut / self.dt).round() as usize).min(self.len());
        Self {
            dt: self.dt,
            samples: self.samples[skip..].to_vec(),
            channels: self.channels,
        }
    }

    /// Keeps every `stride`-th sample.
    pub fn decimate(&self, stride: usize) -> Self {
        Self {
            dt: self.dt * stride as f64,
            samples: self
                .samples
                .iter()
                .step_by(stride.max(1))
                .cloned()
                .collect(),
            channels: self.channels,
        }
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Trajectory<U> {
        Trajectory {
            dt: self.dt,
            samples: self
                .samples
                .iter()
                .map(|s| s.iter().map(&f).collect())
                .collect(),
            channels: self.channels,
        }
    }
}

impl ComplexTrajectory {
    pub fn phases(&self) -> RealTrajectory {
        self.map(|z| z.arg())
    }

    pub fn amplitudes(&self) -> RealTrajectory {
        self.map(|z| z.norm())
    }

    /// Columns `t, re1, im1, re2, im2, ...`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["t".to_string()];
        for k in 1..=self.channels {
            header.push(format!("re{k}"));
            header.push(format!("im{k}"));
        }
        out.write_record(&header)?;
        for (i, s) in self.samples.iter().enumerate() {
            let mut row = vec![format!("{}", self.time(i))];
            for z in s {
                row.push(format!("{}", z.re));
                row.push(format!("{}", z.im));
            }
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let rows = read_rows(r)?;
        let width = rows.first().map(|r| r.len()).unwrap_or(1);
        if width % 2 != 1 {
            return Err(Error::Config("complex CSV needs t plus re/im pairs".into()));
        }
        let samples = rows
            .iter()
            .map(|r| {
                r[1..]
                    .chunks(2)
                    .map(|p| Complex64::new(p[0], p[1]))
                    .collect()
            })
            .collect();
        Ok(Self {
            dt: infer_dt(&rows),
            samples,
            channels: (width - 1) / 2,
        })
    }
}

/// Removes the `2 pi` jumps of a wrapped phase series.
pub fn unwrap_phase(wrapped: &[f64]) -> Vec<f64> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut out = Vec::with_capacity(wrapped.len());
    let mut offset = 0.0;
    for (i, &x) in wrapped.iter().enumerate() {
        if i > 0 {
            let jump = x - wrapped[i - 1];
            offset -= two_pi * (jump / two_pi).round();
        }
        out.push(x + offset);
    }
    out
}

impl RealTrajectory {
    /// Channel-wise [`unwrap_phase`].
    pub fn unwrapped(&self) -> Self {
        let cols: Vec<Vec<f64>> = (0..self.channels)
            .map(|k| unwrap_phase(&self.channel(k)))
            .collect();
        Self {
            dt: self.dt,
            samples: (0..self.len())
                .map(|i| cols.iter().map(|c| c[i]).collect())
                .collect(),
            channels: self.channels,
        }
    }

    /// Columns `t, x1, x2, ...`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["t".to_string()];
        header.extend((1..=self.channels).map(|k| format!("x{k}")));
        out.write_record(&header)?;
        for (i, s) in self.samples.iter().enumerate() {
            let mut row = vec![format!("{}", self.time(i))];
            row.extend(s.iter().map(|x| format!("{x}")));
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let rows = read_rows(r)?;
        let width = rows.first().map(|r| r.len()).unwrap_or(1);
        Ok(Self {
            dt: infer_dt(&rows),
            samples: rows.iter().map(|r| r[1..].to_vec()).collect(),
            channels: width - 1,
        })
    }
}

fn read_rows<R: Read>(r: R) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::Reader::from_reader(r);
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Config(format!("bad number '{f}': {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            let first: &Vec<f64> = first;
            if first.len() != row.len() {
                return Err(Error::Dimension {
                    expected: first.len(),
                    found: row.len(),
                });
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

fn infer_dt(rows: &[Vec<f64>]) -> f64 {
    if rows.len() >= 2 {
        (rows[rows.len() - 1][0] - rows[0][0]) / (rows.len() - 1) as f64
    } else {
        1.0
    }
}
