use num_complex::Complex64;

use super::integrate::{integrate_adaptive, integrate_fixed, Tolerance};
use super::{ComplexTrajectory, RealTrajectory};
use crate::error::{Error, Result};
use crate::normalform::{Hypernetwork, NetworkSystem};
use crate::phasered::{PhaseModel, SlowPhaseSystem};
use crate::polyalg::{ConjPoly, Monomial};

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Dimension { expected, found });
    }
    Ok(())
}

/// RK4 integration of the original network from `z0`.
pub fn integrate_network(
    sys: &NetworkSystem,
    z0: &[Complex64],
    t_end: f64,
    dt: f64,
    stride: usize,
) -> Result<ComplexTrajectory> {
    check_len(sys.n(), z0.len())?;
    let field = sys.compile();
    integrate_fixed(|_, z, out| field.eval(z, out), z0, t_end, dt, stride)
}

/// A vector field given by one polynomial per component, compiled into
/// sparse exponent lists.
#[derive(Clone, Debug)]
pub struct PolynomialField {
    n: usize,
    // per component: list of (var, s, t) factors and coefficient
    terms: Vec<Vec<(Vec<(usize, u32, u32)>, Complex64)>>,
}

fn compile_monomial(m: &Monomial) -> Vec<(usize, u32, u32)> {
    (0..m.n())
        .filter(|&j| m.s()[j] + m.t()[j] > 0)
        .map(|j| (j, m.s()[j], m.t()[j]))
        .collect()
}

impl PolynomialField {
    pub fn new(components: &[ConjPoly]) -> Result<Self> {
        let n = components.len();
        for p in components {
            check_len(n, p.n())?;
        }
        Ok(Self {
            n,
            terms: components
                .iter()
                .map(|p| p.terms().map(|(m, c)| (compile_monomial(m), *c)).collect())
                .collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eval(&self, z: &[Complex64], out: &mut [Complex64]) {
        for (k, terms) in self.terms.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (factors, c) in terms {
                let mut v = *c;
                for &(j, s, t) in factors {
                    v *= z[j].powu(s) * z[j].conj().powu(t);
                }
                acc += v;
            }
            out[k] = acc;
        }
    }
}

/// Truncated normal form `gamma u + beta u|u|^2 + alpha L + alpha^2 (resonant
/// terms)` of `sys`, with the resonant terms taken from `hn`.
pub fn normal_form_field(sys: &NetworkSystem, hn: &Hypernetwork) -> Result<PolynomialField> {
    let n = sys.n();
    check_len(n, hn.n)?;
    let mut comps = sys.local_field();
    let lin = sys.assemble_linear();
    let a2 = sys.alpha * sys.alpha;
    for k in 0..n {
        comps[k] = &comps[k] + &lin[k].scale(Complex64::new(sys.alpha, 0.0));
    }
    for e in hn.hyperedges.iter().chain(&hn.neutral) {
        comps[e.target].add_term(e.monomial.clone(), e.field_coefficient * a2);
    }
    PolynomialField::new(&comps)
}

pub fn integrate_polynomial_field(
    field: &PolynomialField,
    z0: &[Complex64],
    t_end: f64,
    dt: f64,
    stride: usize,
) -> Result<ComplexTrajectory> {
    check_len(field.n(), z0.len())?;
    integrate_fixed(|_, z, out| field.eval(z, out), z0, t_end, dt, stride)
}

/// Adaptive integration of averaged phase equations; phases are not wrapped.
pub fn integrate_phase_model(
    pm: &PhaseModel,
    theta0: &[f64],
    t_end: f64,
    sample_dt: f64,
    tol: Tolerance,
) -> Result<RealTrajectory> {
    check_len(pm.n, theta0.len())?;
    integrate_adaptive(|_, x, out| pm.eval(x, out), theta0, t_end, sample_dt, tol)
}

pub fn integrate_slow_phase(
    sp: &SlowPhaseSystem,
    phi0: &[f64],
    t_end: f64,
    sample_dt: f64,
    tol: Tolerance,
) -> Result<RealTrajectory> {
    check_len(sp.dim(), phi0.len())?;
    integrate_adaptive(|_, x, out| sp.eval(x, out), phi0, t_end, sample_dt, tol)
}
