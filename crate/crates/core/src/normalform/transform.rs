use num_complex::Complex64;
use serde::Serialize;

use super::system::{embed, NetworkSystem, H_DEGREE};
use crate::error::Result;
use crate::polyalg::{
    bracket_truncated, gamma_op, modified_poly, resonance_value, ConjPoly, GammaVector,
};

/// One evaluated non-resonance condition for a coupling monomial on an edge.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeCondition {
    /// Receiving node (0-based).
    pub k: usize,
    /// Sending node (0-based).
    pub l: usize,
    /// Two-slot monomial, e.g. `z1^2 zb2` means `z_k^2 conj(z_l)`.
    pub monomial: String,
    /// `(d1 - d2 - 1) omega_k + (d3 - d4) omega_l`.
    pub value: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonResonanceReport {
    pub eps_res: f64,
    pub conditions: Vec<EdgeCondition>,
    /// Linear coupling monomials; these stay in the normal form untouched.
    pub retained_linear: Vec<String>,
}

impl NonResonanceReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &EdgeCondition> {
        self.conditions.iter().filter(|c| !c.pass)
    }

    /// Smallest `|value|` over all conditions.
    pub fn margin(&self) -> f64 {
        self.conditions
            .iter()
            .map(|c| c.value.abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates the pairwise non-resonance condition of every nonlinear coupling
/// monomial on every edge.
pub fn check_nonresonance(sys: &NetworkSystem, eps_res: f64) -> NonResonanceReport {
    let n = sys.n();
    let g = sys.gamma();
    let nonlinear = sys.coupling_nonlinear();
    let mut conditions = Vec::new();
    for (k, l) in sys.edges() {
        for (m, _) in nonlinear.terms() {
            let single = ConjPoly::from_monomial(m.clone(), Complex64::new(1.0, 0.0));
            let embedded = embed(&single, k, l, n);
            let (em, _) = embedded
                .terms()
                .next()
                .expect("embedding keeps the monomial");
            let value = resonance_value(em, k, &g).im;
            conditions.push(EdgeCondition {
                k,
                l,
                monomial: m.to_string(),
                value,
                pass: value.abs() > eps_res,
            });
        }
    }
    NonResonanceReport {
        eps_res,
        conditions,
        retained_linear: sys
            .coupling_linear()
            .terms()
            .map(|(m, _)| m.to_string())
            .collect(),
    }
}

/// First transformation `w = z - alpha P(z)` with `P_k` the modified
/// polynomial of the nonlinear coupling `N_k`.
pub fn compute_p(sys: &NetworkSystem, eps_res: f64) -> Result<Vec<ConjPoly>> {
    let g = sys.gamma();
    sys.assemble_nonlinear()
        .iter()
        .enumerate()
        .map(|(k, nk)| modified_poly(nk, k, &g, eps_res))
        .collect()
}

/// Per-edge two-slot modified coupling `h^_kl(z, w)` (nonlinear part only).
pub fn edge_modified_coupling(
    sys: &NetworkSystem,
    k: usize,
    l: usize,
    eps_res: f64,
) -> Result<ConjPoly> {
    let g = GammaVector::new(vec![sys.gamma()[k], sys.gamma()[l]])?;
    modified_poly(&sys.coupling_nonlinear(), 0, &g, eps_res)
}

/// Intermediates and result of the second transformation `u = w - alpha Q(w)`.
#[derive(Clone, Debug)]
pub struct SecondTransform {
    /// `[P_k || (beta_j z_j |z_j|^2)_j]`
    pub l1: Vec<ConjPoly>,
    /// `[beta_k z_k |z_k|^2 || P]`
    pub l2: Vec<ConjPoly>,
    /// `S_k = L2_k - L1_k`: the order-alpha terms created by the first
    /// transformation enter `dw_k/dt` as `+alpha S_k`.
    pub s: Vec<ConjPoly>,
    /// `Q_k`, the modified polynomial of `S_k`.
    pub q: Vec<ConjPoly>,
}

fn cubic_field(sys: &NetworkSystem) -> Vec<ConjPoly> {
    let n = sys.n();
    let g = sys.gamma();
    sys.local_field()
        .into_iter()
        .enumerate()
        .map(|(k, f)| &f - &ConjPoly::var(n, k).scale(g[k]))
        .collect()
}

pub fn compute_second_transform(
    sys: &NetworkSystem,
    p: &[ConjPoly],
    eps_res: f64,
) -> Result<SecondTransform> {
    let n = sys.n();
    let g = sys.gamma();
    let cubic = cubic_field(sys);
    let mut out = SecondTransform {
        l1: Vec::with_capacity(n),
        l2: Vec::with_capacity(n),
        s: Vec::with_capacity(n),
        q: Vec::with_capacity(n),
    };
    for k in 0..n {
        let l1 = bracket_truncated(&p[k], &cubic, H_DEGREE)?;
        let l2 = bracket_truncated(&cubic[k], p, H_DEGREE)?;
        let s = &l2 - &l1;
        let q = modified_poly(&s, k, &g, eps_res)?;
        out.l1.push(l1);
        out.l2.push(l2);
        out.s.push(s);
        out.q.push(q);
    }
    Ok(out)
}

/// Both near-identity transformations together.
#[derive(Clone, Debug)]
pub struct TransformSeries {
    pub p: Vec<ConjPoly>,
    pub q: Vec<ConjPoly>,
    pub truncation_degree: u32,
}

impl TransformSeries {
    pub fn derive(sys: &NetworkSystem, eps_res: f64) -> Result<Self> {
        let p = compute_p(sys, eps_res)?;
        let second = compute_second_transform(sys, &p, eps_res)?;
        Ok(Self {
            p,
            q: second.q,
            truncation_degree: H_DEGREE,
        })
    }

    /// Maps original coordinates to normal-form coordinates:
    /// `w = z - alpha P(z)`, `u = w - alpha Q(w)`.
    pub fn to_normal_coordinates(&self, z: &[Complex64], alpha: f64) -> Vec<Complex64> {
        let w: Vec<Complex64> = z
            .iter()
            .zip(&self.p)
            .map(|(zk, pk)| zk - pk.evaluate(z) * alpha)
            .collect();
        w.iter()
            .zip(&self.q)
            .map(|(wk, qk)| wk - qk.evaluate(&w) * alpha)
            .collect()
    }
}

/// Largest coefficient of `gamma_k X_k + Y_k - Gamma X_k` relative to the
/// largest coefficient of `Y`. Zero when `X` solves the homological equation.
pub fn homological_residual(x: &[ConjPoly], y: &[ConjPoly], g: &GammaVector) -> Result<f64> {
    let scale = y.iter().map(ConjPoly::max_abs_coeff).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for (k, (xk, yk)) in x.iter().zip(y).enumerate() {
        let r = &(&xk.scale(g[k]) + yk) - &gamma_op(xk, g)?;
        worst = worst.max(r.max_abs_coeff());
    }
    Ok(if scale > 0.0 { worst / scale } else { worst })
}
