//! Polynomial algebra in complex variables and their conjugates.
//!
//! Besides ordinary ring operations this module provides the bracket
//! `[R||S]` (the derivative of `R` along the formal vector field `S`, with
//! conjugate variables transported by conjugated components), the diagonal
//! operator `Gamma`, and the per-node "modified polynomial" obtained by
//! dividing every monomial by its resonance denominator.

mod monomial;
mod poly;
mod series;

pub use monomial::Monomial;
pub use poly::ConjPoly;
pub use series::AlphaSeries;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance on `|Im(resonance value)|` below which a monomial is
/// treated as resonant.
pub const DEFAULT_EPS_RES: f64 = 0.1;

/// Linear rates `gamma_k = lambda_k + i omega_k` of the uncoupled nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaVector {
    gamma: Vec<Complex64>,
}

impl GammaVector {
    pub fn new(gamma: Vec<Complex64>) -> Result<Self> {
        if let Some(k) = gamma.iter().position(|g| g.norm() == 0.0) {
            return Err(Error::Config(format!("gamma_{} must be nonzero", k + 1)));
        }
        Ok(Self { gamma })
    }

    /// Shared real part `lambda` with frequencies `omega`.
    pub fn from_lambda_omega(lambda: f64, omega: &[f64]) -> Result<Self> {
        Self::new(omega.iter().map(|&w| Complex64::new(lambda, w)).collect())
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.gamma
    }

    pub fn omega(&self) -> Vec<f64> {
        self.gamma.iter().map(|g| g.im).collect()
    }
}

impl std::ops::Index<usize> for GammaVector {
    type Output = Complex64;
    fn index(&self, k: usize) -> &Complex64 {
        &self.gamma[k]
    }
}

/// Operations accepted by [`arith`].
#[derive(Clone, Copy, Debug)]
pub enum ArithOp {
    Add,
    Mul,
    Scale(Complex64),
    Conj,
}

/// Single entry point for the ring operations. `Scale` and `Conj` act on `p`
/// and ignore `q`.
pub fn arith(p: &ConjPoly, q: &ConjPoly, op: ArithOp) -> Result<ConjPoly> {
    match op {
        ArithOp::Add => p.checked_add(q),
        ArithOp::Mul => p.checked_mul(q),
        ArithOp::Scale(c) => Ok(p.scale(c)),
        ArithOp::Conj => Ok(p.conj()),
    }
}

fn check_field(r: &ConjPoly, s: &[ConjPoly]) -> Result<()> {
    if s.len() != r.n() {
        return Err(Error::Dimension {
            expected: r.n(),
            found: s.len(),
        });
    }
    if let Some(bad) = s.iter().find(|p| p.n() != r.n()) {
        return Err(Error::Dimension {
            expected: r.n(),
            found: bad.n(),
        });
    }
    Ok(())
}

/// The bracket `[R||S] = sum_j dR/dz_j * S_j + dR/dconj(z_j) * conj(S_j)`.
pub fn bracket(r: &ConjPoly, s: &[ConjPoly]) -> Result<ConjPoly> {
    bracket_truncated(r, s, u32::MAX)
}

/// [`bracket`] keeping only terms of degree `<= max_degree`.
pub fn bracket_truncated(r: &ConjPoly, s: &[ConjPoly], max_degree: u32) -> Result<ConjPoly> {
    check_field(r, s)?;
    let n = r.n();
    let s_conj: Vec<ConjPoly> = s.iter().map(ConjPoly::conj).collect();
    let mut out = ConjPoly::zero(n);
    for j in 0..n {
        let d = r.partial(j, false);
        if !d.is_zero() && !s[j].is_zero() {
            out += &d.mul_truncated(&s[j], max_degree);
        }
        let db = r.partial(j, true);
        if !db.is_zero() && !s_conj[j].is_zero() {
            out += &db.mul_truncated(&s_conj[j], max_degree);
        }
    }
    Ok(out)
}

/// Eigenvalue of `Gamma` on a monomial: `sum s_j gamma_j + sum t_j conj(gamma_j)`.
pub fn gamma_eigenvalue(m: &Monomial, g: &GammaVector) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..m.n() {
        acc += g[j] * m.s()[j] as f64 + g[j].conj() * m.t()[j] as f64;
    }
    acc
}

/// `Gamma R`: every monomial multiplied by its [`gamma_eigenvalue`].
pub fn gamma_op(r: &ConjPoly, g: &GammaVector) -> Result<ConjPoly> {
    if g.len() != r.n() {
        return Err(Error::Dimension {
            expected: r.n(),
            found: g.len(),
        });
    }
    let mut out = ConjPoly::zero(r.n());
    for (m, c) in r.terms() {
        out.add_term(m.clone(), c * gamma_eigenvalue(m, g));
    }
    Ok(out)
}

/// `sum s_j gamma_j + sum t_j conj(gamma_j) - gamma_k`. Its imaginary part is
/// the frequency combination that decides whether `m` is resonant at node `k`.
pub fn resonance_value(m: &Monomial, k: usize, g: &GammaVector) -> Complex64 {
    gamma_eigenvalue(m, g) - g[k]
}

/// Whether `m` counts as resonant at node `k` under tolerance `eps_res`.
pub fn is_resonant(m: &Monomial, k: usize, g: &GammaVector, eps_res: f64) -> bool {
    resonance_value(m, k, g).im.abs() <= eps_res
}

/// The `k`-th modified polynomial: each monomial divided by its resonance
/// value. Solves `Gamma Q^ - gamma_k Q^ = Q`.
pub fn modified_poly(q: &ConjPoly, k: usize, g: &GammaVector, eps_res: f64) -> Result<ConjPoly> {
    if g.len() != q.n() {
        return Err(Error::Dimension {
            expected: q.n(),
            found: g.len(),
        });
    }
    if k >= q.n() {
        return Err(Error::Index {
            index: k,
            len: q.n(),
        });
    }
    let mut out = ConjPoly::zero(q.n());
    for (m, c) in q.terms() {
        let d = resonance_value(m, k, g);
        if d.norm() <= eps_res {
            return Err(Error::ResonantTerm {
                monomial: m.to_string(),
                node: k + 1,
                re: d.re,
                im: d.im,
                eps: eps_res,
            });
        }
        out.add_term(m.clone(), c / d);
    }
    Ok(out)
}

/// Replaces `z_j` by `subs[j]` and `conj(z_j)` by `conj(subs[j])`, expanding
/// and dropping everything above `truncate_at`.
pub fn substitute(p: &ConjPoly, subs: &[ConjPoly], truncate_at: u32) -> Result<ConjPoly> {
    check_field(p, subs)?;
    let n_out = subs.first().map(ConjPoly::n).unwrap_or(p.n());
    if let Some(bad) = subs.iter().find(|q| q.n() != n_out) {
        return Err(Error::Dimension {
            expected: n_out,
            found: bad.n(),
        });
    }
    let mut cache = PowerCache::new(subs, truncate_at);
    let mut out = ConjPoly::zero(n_out);
    for (m, c) in p.terms() {
        let mut prod = ConjPoly::constant(n_out, *c);
        for j in 0..p.n() {
            if m.s()[j] > 0 {
                prod = prod.mul_truncated(cache.pow(j, false, m.s()[j]), truncate_at);
            }
            if m.t()[j] > 0 {
                prod = prod.mul_truncated(cache.pow(j, true, m.t()[j]), truncate_at);
            }
            if prod.is_zero() {
                break;
            }
        }
        out += &prod;
    }
    Ok(out)
}

struct PowerCache<'a> {
    subs: &'a [ConjPoly],
    conj: Vec<ConjPoly>,
    max_degree: u32,
    // powers[j][c][e - 1]
    powers: Vec<[Vec<ConjPoly>; 2]>,
}

impl<'a> PowerCache<'a> {
    fn new(subs: &'a [ConjPoly], max_degree: u32) -> Self {
        Self {
            subs,
            conj: subs.iter().map(ConjPoly::conj).collect(),
            max_degree,
            powers: vec![[Vec::new(), Vec::new()]; subs.len()],
        }
    }

    fn pow(&mut self, j: usize, conj: bool, e: u32) -> &ConjPoly {
        let base = if conj { &self.conj[j] } else { &self.subs[j] };
        let list = &mut self.powers[j][conj as usize];
        while list.len() < e as usize {
            let next = match list.last() {
                None => base.truncate(self.max_degree),
                Some(prev) => prev.mul_truncated(base, self.max_degree),
            };
            list.push(next);
        }
        &list[e as usize - 1]
    }
}
