use std::collections::HashSet;
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::PhaseSeries;
use crate::error::{Error, Result};

/// One column of the regression library.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    Constant,
    /// `t^p`, with `t` measured from the first sample.
    Drift(u32),
    Sin(Vec<i64>),
    Cos(Vec<i64>),
}

fn fmt_combo(m: &[i64], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (k, &c) in m.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 {
            "-"
        } else if first {
            ""
        } else {
            "+"
        };
        let mag = c.unsigned_abs();
        if mag == 1 {
            write!(f, "{sign}x{}", k + 1)?;
        } else {
            write!(f, "{sign}{mag}x{}", k + 1)?;
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Feature::Constant => write!(f, "1"),
            Feature::Drift(p) => write!(f, "t^{p}"),
            Feature::Sin(m) => {
                write!(f, "sin(")?;
                fmt_combo(m, f)?;
                write!(f, ")")
            }
            Feature::Cos(m) => {
                write!(f, "cos(")?;
                fmt_combo(m, f)?;
                write!(f, ")")
            }
        }
    }
}

/// Feature descriptors together with their evaluated matrix.
#[derive(Clone, Debug)]
pub struct BasisLibrary {
    pub features: Vec<Feature>,
    /// Samples by features.
    pub matrix: DMatrix<f64>,
}

impl BasisLibrary {
    pub fn samples(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn position(&self, feature: &Feature) -> Option<usize> {
        self.features.iter().position(|f| f == feature)
    }

    /// Concatenates the rows of libraries that share one feature list, e.g.
    /// to pool several runs into one regression.
    pub fn stack(parts: &[BasisLibrary]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Config("nothing to stack".into()))?;
        if let Some(p) = parts.iter().find(|p| p.features != first.features) {
            return Err(Error::Dimension {
                expected: first.len(),
                found: p.len(),
            });
        }
        let rows: usize = parts.iter().map(BasisLibrary::samples).sum();
        let mut matrix = DMatrix::zeros(rows, first.len());
        let mut at = 0;
        for p in parts {
            matrix.rows_mut(at, p.samples()).copy_from(&p.matrix);
            at += p.samples();
        }
        Ok(Self {
            features: first.features.clone(),
            matrix,
        })
    }

    /// Keeps the rows in `range`.
    pub fn rows(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            features: self.features.clone(),
            matrix: self.matrix.rows(range.start, range.len()).into_owned(),
        }
    }
}

/// Column order: `1, t, ..., t^drift_degree`, then `sin, cos` for each combo.
pub fn build_library(
    ps: &PhaseSeries,
    combos: &[Vec<i64>],
    drift_degree: u32,
) -> Result<BasisLibrary> {
    build_library_from(&ps.phases, ps.dt, combos, drift_degree)
}

/// [`build_library`] on raw channel-major phase arrays sampled every `dt`.
pub fn build_library_from(
    phases: &[Vec<f64>],
    dt: f64,
    combos: &[Vec<i64>],
    drift_degree: u32,
) -> Result<BasisLibrary> {
    if combos.is_empty() {
        return Err(Error::Config(
            "the library needs at least one combination".into(),
        ));
    }
    let mut seen = HashSet::new();
    for c in combos {
        if c.len() != phases.len() {
            return Err(Error::Dimension {
                expected: phases.len(),
                found: c.len(),
            });
        }
        if !seen.insert(c.clone()) {
            return Err(Error::Config(format!("duplicate combination {c:?}")));
        }
    }
    let samples = phases.first().map_or(0, Vec::len);
    let mut features = vec![Feature::Constant];
    features.extend((1..=drift_degree).map(Feature::Drift));
    for c in combos {
        features.push(Feature::Sin(c.clone()));
        features.push(Feature::Cos(c.clone()));
    }
    let mut matrix = DMatrix::zeros(samples, features.len());
    for i in 0..samples {
        let t = i as f64 * dt;
        matrix[(i, 0)] = 1.0;
        for p in 1..=drift_degree as usize {
            matrix[(i, p)] = t.powi(p as i32);
        }
        for (j, c) in combos.iter().enumerate() {
            let psi: f64 = c.iter().zip(phases).map(|(&m, p)| m as f64 * p[i]).sum();
            let (s, co) = psi.sin_cos();
            let col = 1 + drift_degree as usize + 2 * j;
            matrix[(i, col)] = s;
            matrix[(i, col + 1)] = co;
        }
    }
    Ok(BasisLibrary { features, matrix })
}

/// Singles `e_k`, pairwise differences `e_p - e_q` (p < q) and triplets
/// `e_p + e_q - e_k` (p <= q, both different from k) for `n` channels.
pub fn standard_combos(n: usize) -> Vec<Vec<i64>> {
    let unit = |k: usize| -> Vec<i64> { (0..n).map(|j| i64::from(j == k)).collect() };
    let mut out: Vec<Vec<i64>> = (0..n).map(unit).collect();
    for p in 0..n {
        for q in p + 1..n {
            let mut v = unit(p);
            v[q] = -1;
            out.push(v);
        }
    }
    let mut seen: HashSet<Vec<i64>> = out.iter().cloned().collect();
    for k in 0..n {
        for p in 0..n {
            for q in p..n {
                if p == k || q == k {
                    continue;
                }
                let mut v = vec![0i64; n];
                v[p] += 1;
                v[q] += 1;
                v[k] -= 1;
                let neg: Vec<i64> = v.iter().map(|x| -x).collect();
                if !seen.contains(&v) && !seen.contains(&neg) {
                    seen.insert(v.clone());
                    out.push(v);
                }
            }
        }
    }
    out
}
