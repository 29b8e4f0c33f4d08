use serde::Serialize;

use super::coupling::{compute_g, G_DEGREE};
use super::system::NetworkSystem;
use super::transform::{compute_p, compute_second_transform, homological_residual};
use crate::error::Result;
use crate::polyalg::{AlphaSeries, ConjPoly};

/// Residuals of a full symbolic re-expansion of the transformed vector field.
#[derive(Clone, Debug, Serialize)]
pub struct CancellationReport {
    /// Degree through which the re-expanded field was computed.
    pub degree: u32,
    /// Relative residual of `gamma_k P_k + N_k - Gamma P_k`.
    pub p_residual: f64,
    /// Relative residual of `gamma_k Q_k + S_k - Gamma Q_k`.
    pub q_residual: f64,
    /// Largest order-`alpha^0` coefficient that is not part of the local field.
    pub order0_residual: f64,
    /// Largest order-`alpha` coefficient other than the retained linear coupling.
    pub order1_residual: f64,
    /// Largest coefficient of `(alpha^2 part) + G_k` at degree at most 4.
    pub order2_residual: f64,
}

impl CancellationReport {
    pub fn passed(&self, homological_tol: f64, order1_tol: f64) -> bool {
        self.p_residual <= homological_tol
            && self.q_residual <= homological_tol
            && self.order1_residual <= order1_tol
    }
}

fn identity(n: usize, order: usize) -> Vec<AlphaSeries> {
    (0..n)
        .map(|k| AlphaSeries::term(ConjPoly::var(n, k), 0, order))
        .collect()
}

/// Re-expands `du/dt` after both transformations as a series in `alpha`
/// and compares each order with what the normal form predicts.
///
/// With `Phi` the composite map `z -> u`, the transformed field is
/// `[Phi_k || F](Psi(u))` where `F` is the original field and `Psi` the
/// inverse of `Phi`, obtained here by fixed-point iteration in `alpha`.
pub fn cancellation_check(
    sys: &NetworkSystem,
    eps_res: f64,
    degree: u32,
) -> Result<CancellationReport> {
    const ORDER: usize = 2;
    let n = sys.n();
    let gamma = sys.gamma();
    let p = compute_p(sys, eps_res)?;
    let second = compute_second_transform(sys, &p, eps_res)?;
    let nonlinear = sys.assemble_nonlinear();
    let p_residual = homological_residual(&p, &nonlinear, &gamma)?;
    let q_residual = homological_residual(&second.q, &second.s, &gamma)?;

    let id = identity(n, ORDER);
    let w: Vec<AlphaSeries> = (0..n)
        .map(|k| id[k].sub(&AlphaSeries::term(p[k].clone(), 1, ORDER)))
        .collect();
    let q_series: Vec<AlphaSeries> = second
        .q
        .iter()
        .map(|q| AlphaSeries::term(q.clone(), 1, ORDER))
        .collect();
    let phi: Vec<AlphaSeries> = (0..n)
        .map(|k| Ok(w[k].sub(&AlphaSeries::substitute(&q_series[k], &w, degree)?)))
        .collect::<Result<_>>()?;

    let local = sys.local_field();
    let h = sys.assemble_h();
    let field: Vec<AlphaSeries> = (0..n)
        .map(|k| {
            AlphaSeries::term(local[k].clone(), 0, ORDER).add(&AlphaSeries::term(
                h[k].clone(),
                1,
                ORDER,
            ))
        })
        .collect();

    let mut psi = id.clone();
    for _ in 0..=ORDER {
        let mut next = Vec::with_capacity(n);
        for k in 0..n {
            let image = AlphaSeries::substitute(&phi[k], &psi, degree)?;
            next.push(id[k].add(&psi[k].sub(&image)));
        }
        psi = next;
    }

    let dec = compute_g(sys, eps_res)?;
    let lin = sys.assemble_linear();
    let mut order0_residual: f64 = 0.0;
    let mut order1_residual: f64 = 0.0;
    let mut order2_residual: f64 = 0.0;
    for k in 0..n {
        let in_z = AlphaSeries::bracket(&phi[k], &field, degree)?;
        let in_u = AlphaSeries::substitute(&in_z, &psi, degree)?;
        order0_residual = order0_residual.max((&in_u.coeff(0) - &local[k]).max_abs_coeff());
        order1_residual = order1_residual.max((&in_u.coeff(1) - &lin[k]).max_abs_coeff());
        let second_order = in_u.coeff(2).truncate(G_DEGREE);
        order2_residual = order2_residual.max((&second_order + &dec.g[k]).max_abs_coeff());
    }
    Ok(CancellationReport {
        degree,
        p_residual,
        q_residual,
        order0_residual,
        order1_residual,
        order2_residual,
    })
}
