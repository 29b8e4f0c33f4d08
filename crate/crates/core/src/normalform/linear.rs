use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::system::NetworkSystem;
use crate::error::{Error, Result};
use crate::polyalg::Monomial;

/// Frequencies of the linearly coupled network, matched to the nodes.
#[derive(Clone, Debug, Serialize)]
pub struct FrequencyShift {
    /// `Im` of the eigenvalue continued from node `k`.
    pub frequencies: Vec<f64>,
    /// `frequencies[k] - omega[k]`.
    pub shifts: Vec<f64>,
    /// Set when two natural frequencies are closer than the coupling scale or
    /// two nodes were matched to the same eigenvalue.
    pub degenerate: bool,
}

/// Linearisation `U = diag(gamma) + alpha (a D + b A)` of the network about the
/// origin, where `h` contains `a z + b w` and `D` holds the weighted in-degrees.
pub fn linear_matrix(sys: &NetworkSystem) -> Result<DMatrix<Complex64>> {
    let lin = sys.coupling_linear();
    let n = sys.n();
    let coeff = |s: [u32; 2], t: [u32; 2]| lin.coeff(&Monomial::new(s.to_vec(), t.to_vec()));
    if coeff([0, 0], [1, 0]) != Complex64::default()
        || coeff([0, 0], [0, 1]) != Complex64::default()
    {
        return Err(Error::Config(
            "linear coupling through conjugate variables has no complex-linear eigenproblem".into(),
        ));
    }
    let a = coeff([1, 0], [0, 0]);
    let b = coeff([0, 1], [0, 0]);
    let gamma = sys.gamma();
    let mut u = DMatrix::from_element(n, n, Complex64::default());
    for k in 0..n {
        u[(k, k)] = gamma[k];
        for l in 0..n {
            let akl = sys.adjacency[k][l];
            if akl != 0.0 {
                u[(k, l)] += b * (sys.alpha * akl);
                u[(k, k)] += a * (sys.alpha * akl);
            }
        }
    }
    Ok(u)
}

/// Eigenvalue of `u` continued from the diagonal entry `k`, found by
/// shifted inverse iteration started at the unit vector `e_k`.
fn continued_eigenvalue(u: &DMatrix<Complex64>, k: usize) -> Result<Complex64> {
    let n = u.nrows();
    // a tiny offset keeps the shifted matrix invertible when the shift is exact
    let shift = u[(k, k)] + Complex64::new(1e-9, 1e-9);
    let mut m = u.clone();
    for j in 0..n {
        m[(j, j)] -= shift;
    }
    let lu = m.lu();
    let mut x = DVector::from_element(n, Complex64::default());
    x[k] = Complex64::new(1.0, 0.0);
    let mut value = u[(k, k)];
    for iteration in 0..200 {
        let y = lu
            .solve(&x)
            .ok_or_else(|| Error::Rank("shifted linear matrix is singular".into()))?;
        let norm = y.norm();
        x = y / Complex64::new(norm, 0.0);
        let ux = u * &x;
        let next = x.dotc(&ux);
        if (next - value).norm() < 1e-15 * next.norm().max(1.0) && iteration > 1 {
            return Ok(next);
        }
        value = next;
    }
    Ok(value)
}

/// Frequency shifts caused by the linear part of the coupling.
pub fn linear_frequency_shift(sys: &NetworkSystem) -> Result<FrequencyShift> {
    let n = sys.n();
    let u = linear_matrix(sys)?;
    let eig: Vec<Complex64> = (0..n)
        .map(|k| continued_eigenvalue(&u, k))
        .collect::<Result<_>>()?;
    let frequencies: Vec<f64> = eig.iter().map(|e| e.im).collect();
    let shifts: Vec<f64> = frequencies
        .iter()
        .zip(&sys.omega)
        .map(|(f, w)| f - w)
        .collect();

    let scale = sys.alpha.abs()
        * sys
            .adjacency
            .iter()
            .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max);
    let mut degenerate = false;
    for i in 0..n {
        for j in (i + 1)..n {
            let close = (sys.omega[i] - sys.omega[j]).abs() <= scale;
            let same = (eig[i] - eig[j]).norm() <= 1e-9 * eig[i].norm().max(1.0);
            if close || same {
                degenerate = true;
                log::warn!(
                    "nodes {} and {} have nearly equal frequencies; eigenvalue matching is ambiguous",
                    i + 1,
                    j + 1
                );
            }
        }
    }
    Ok(FrequencyShift {
        frequencies,
        shifts,
        degenerate,
    })
}
