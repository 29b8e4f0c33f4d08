//! Numerical averaging used to cross-check the closed-form phase reduction.

use num_complex::Complex64;

use crate::polyalg::ConjPoly;

/// `Im(field(u) / u_k)` at `u_j = r_j e^{i theta_j}`: the instantaneous
/// phase velocity contributed by `field` to node `k`.
pub fn averaged_phase_velocity(field: &ConjPoly, k: usize, radii: &[f64], theta: &[f64]) -> f64 {
    let u: Vec<Complex64> = radii
        .iter()
        .zip(theta)
        .map(|(&r, &t)| Complex64::from_polar(r, t))
        .collect();
    (field.evaluate(&u) / u[k]).im
}

/// Sine and cosine coefficients of `combo . theta` in the phase velocity
/// of node `k`, computed as a torus average over a uniform grid in all
/// phases. The grid is fine enough that the polynomial's harmonics cannot
/// alias onto `combo`.
pub fn fourier_coefficient(field: &ConjPoly, k: usize, radii: &[f64], combo: &[i64]) -> (f64, f64) {
    let n = radii.len();
    let degree = field.terms().map(|(m, _)| m.degree()).max().unwrap_or(0) as i64 + 1;
    let reach = combo.iter().map(|c| c.abs()).max().unwrap_or(0);
    let g = (2 * (degree + reach) + 1) as usize;
    let total = g.pow(n as u32);
    let step = std::f64::consts::TAU / g as f64;
    let mut theta = vec![0.0; n];
    let (mut s, mut c) = (0.0, 0.0);
    for idx in 0..total {
        let mut rest = idx;
        for t in theta.iter_mut() {
            *t = (rest % g) as f64 * step;
            rest /= g;
        }
        let v = averaged_phase_velocity(field, k, radii, &theta);
        let psi: f64 = combo.iter().zip(&theta).map(|(&m, &t)| m as f64 * t).sum();
        s += v * psi.sin();
        c += v * psi.cos();
    }
    (2.0 * s / total as f64, 2.0 * c / total as f64)
}
