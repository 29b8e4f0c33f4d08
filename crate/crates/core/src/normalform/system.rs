use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::{ConjPoly, GammaVector, Monomial, DEFAULT_EPS_RES};

/// Degree to which the coupling is Taylor-truncated before transforming.
pub const H_DEGREE: u32 = 5;

/// A network of Hopf oscillators with pairwise polynomial coupling:
///
/// `dz_k/dt = gamma_k z_k + beta_k z_k |z_k|^2 + alpha sum_l A_kl h(z_k, z_l)`
///
/// with `gamma_k = lambda_k + i omega_k`. The coupling `h` is a polynomial in
/// two slots: variable 0 is the receiving node, variable 1 the sender.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkSystem {
    pub adjacency: Vec<Vec<f64>>,
    pub lambda: Vec<f64>,
    pub omega: Vec<f64>,
    pub beta: Vec<Complex64>,
    pub coupling: ConjPoly,
    pub alpha: f64,
    pub eps_res: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ScalarOrVec {
    Scalar(f64),
    Vec(Vec<f64>),
}

impl ScalarOrVec {
    fn expand(&self, n: usize, name: &str) -> Result<Vec<f64>> {
        match self {
            ScalarOrVec::Scalar(x) => Ok(vec![*x; n]),
            ScalarOrVec::Vec(v) if v.len() == n => Ok(v.clone()),
            ScalarOrVec::Vec(v) => Err(Error::Config(format!(
                "{name} has {} entries, expected {n}",
                v.len()
            ))),
        }
    }
}

/// On-disk form of a [`NetworkSystem`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemConfig {
    pub n: usize,
    pub adjacency: Vec<Vec<f64>>,
    lambda: ScalarOrVec,
    pub omega: Vec<f64>,
    #[serde(default = "default_beta_re")]
    beta_re: ScalarOrVec,
    #[serde(default = "default_beta_im")]
    beta_im: ScalarOrVec,
    pub coupling: ConjPoly,
    pub alpha: f64,
    #[serde(default)]
    pub eps_res: Option<f64>,
}

fn default_beta_re() -> ScalarOrVec {
    ScalarOrVec::Scalar(-1.0)
}

fn default_beta_im() -> ScalarOrVec {
    ScalarOrVec::Scalar(0.0)
}

impl NetworkSystem {
    /// Builds a system with a shared `lambda` and `beta = -1` at every node.
    pub fn new(
        adjacency: Vec<Vec<f64>>,
        lambda: f64,
        omega: Vec<f64>,
        coupling: ConjPoly,
        alpha: f64,
    ) -> Result<Self> {
        let n = omega.len();
        let sys = Self {
            adjacency,
            lambda: vec![lambda; n],
            omega,
            beta: vec![Complex64::new(-1.0, 0.0); n],
            coupling,
            alpha,
            eps_res: DEFAULT_EPS_RES,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.adjacency.len() != n || self.adjacency.iter().any(|row| row.len() != n) {
            return Err(Error::Config(format!("adjacency must be {n}x{n}")));
        }
        if self.lambda.len() != n || self.beta.len() != n {
            return Err(Error::Config(
                "lambda and beta need one entry per node".into(),
            ));
        }
        if self.coupling.n() != 2 {
            return Err(Error::Config(format!(
                "coupling must be a polynomial in two slots (z, w), found {} variables",
                self.coupling.n()
            )));
        }
        if self.coupling.terms().any(|(m, _)| m.degree() == 0) {
            return Err(Error::Config(
                "coupling must have a vanishing constant term".into(),
            ));
        }
        if !(self.eps_res > 0.0) {
            return Err(Error::Config("eps_res must be positive".into()));
        }
        for k in 0..n {
            if self.adjacency[k][k] != 0.0 {
                log::warn!(
                    "node {} has a self-loop (A_kk = {}); it is folded into H_k",
                    k + 1,
                    self.adjacency[k][k]
                );
            }
        }
        Ok(())
    }

    pub fn from_config(cfg: &SystemConfig) -> Result<Self> {
        let n = cfg.n;
        if cfg.omega.len() != n {
            return Err(Error::Config(format!(
                "omega has {} entries, expected {n}",
                cfg.omega.len()
            )));
        }
        let beta_re = cfg.beta_re.expand(n, "beta_re")?;
        let beta_im = cfg.beta_im.expand(n, "beta_im")?;
        let sys = Self {
            adjacency: cfg.adjacency.clone(),
            lambda: cfg.lambda.expand(n, "lambda")?,
            omega: cfg.omega.clone(),
            beta: beta_re
                .iter()
                .zip(&beta_im)
                .map(|(&r, &i)| Complex64::new(r, i))
                .collect(),
            coupling: cfg.coupling.clone(),
            alpha: cfg.alpha,
            eps_res: cfg.eps_res.unwrap_or(DEFAULT_EPS_RES),
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn to_config(&self) -> SystemConfig {
        let shared = |v: &[f64]| {
            if v.iter().all(|x| *x == v[0]) {
                ScalarOrVec::Scalar(v[0])
            } else {
                ScalarOrVec::Vec(v.to_vec())
            }
        };
        let re: Vec<f64> = self.beta.iter().map(|b| b.re).collect();
        let im: Vec<f64> = self.beta.iter().map(|b| b.im).collect();
        SystemConfig {
            n: self.n(),
            adjacency: self.adjacency.clone(),
            lambda: shared(&self.lambda),
            omega: self.omega.clone(),
            beta_re: shared(&re),
            beta_im: shared(&im),
            coupling: self.coupling.clone(),
            alpha: self.alpha,
            eps_res: Some(self.eps_res),
        }
    }

    pub fn n(&self) -> usize {
        self.omega.len()
    }

    pub fn gamma(&self) -> GammaVector {
        GammaVector::new(
            self.lambda
                .iter()
                .zip(&self.omega)
                .map(|(&l, &w)| Complex64::new(l, w))
                .collect(),
        )
        .expect("gamma_k = lambda_k + i omega_k must be nonzero")
    }

    /// Radius of the uncoupled limit cycle of node `k`.
    pub fn limit_cycle_radius(&self, k: usize) -> Result<f64> {
        let (l, b) = (self.lambda[k], self.beta[k].re);
        if l <= 0.0 || b >= 0.0 {
            return Err(Error::NoLimitCycle {
                node: k + 1,
                re_gamma: l,
                re_beta: b,
            });
        }
        Ok((-l / b).sqrt())
    }

    /// Ordered pairs `(k, l)` with `A_kl != 0`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for k in 0..n {
            for l in 0..n {
                if self.adjacency[k][l] != 0.0 {
                    out.push((k, l));
                }
            }
        }
        out
    }

    /// Degree-one part of the coupling (kept in the normal form).
    pub fn coupling_linear(&self) -> ConjPoly {
        self.coupling.homogeneous(1)
    }

    /// Part of the coupling of degree two and higher, truncated at [`H_DEGREE`].
    pub fn coupling_nonlinear(&self) -> ConjPoly {
        self.coupling
            .filter(|m, _| m.degree() >= 2)
            .truncate(H_DEGREE)
    }

    /// `H_k = sum_l A_kl h(z_k, z_l)` for every node, truncated at `H_DEGREE`.
    pub fn assemble_h(&self) -> Vec<ConjPoly> {
        self.assemble(&self.coupling.truncate(H_DEGREE))
    }

    /// Linear part `L_k` of `H_k`.
    pub fn assemble_linear(&self) -> Vec<ConjPoly> {
        self.assemble(&self.coupling_linear())
    }

    /// Nonlinear part `N_k` of `H_k` (the part that gets transformed away).
    pub fn assemble_nonlinear(&self) -> Vec<ConjPoly> {
        self.assemble(&self.coupling_nonlinear())
    }

    fn assemble(&self, h: &ConjPoly) -> Vec<ConjPoly> {
        let n = self.n();
        let mut out = vec![ConjPoly::zero(n); n];
        for (k, l) in self.edges() {
            out[k] += &embed(h, k, l, n).scale(Complex64::new(self.adjacency[k][l], 0.0));
        }
        out
    }

    /// The isolated node field `gamma_k z_k + beta_k z_k |z_k|^2` as polynomials.
    pub fn local_field(&self) -> Vec<ConjPoly> {
        let n = self.n();
        let g = self.gamma();
        (0..n)
            .map(|k| {
                let mut p = ConjPoly::var(n, k).scale(g[k]);
                let mut s = vec![0; n];
                let mut t = vec![0; n];
                s[k] = 2;
                t[k] = 1;
                p.add_term(Monomial::new(s, t), self.beta[k]);
                p
            })
            .collect()
    }

    /// Compiles the right-hand side for fast numerical evaluation.
    pub fn compile(&self) -> CompiledField {
        CompiledField::new(self)
    }
}

/// Substitutes `z -> z_k`, `w -> z_l` in a two-slot polynomial.
pub fn embed(h: &ConjPoly, k: usize, l: usize, n: usize) -> ConjPoly {
    h.relabel(&[k, l], n)
}

/// Pre-digested right-hand side of a [`NetworkSystem`].
#[derive(Clone, Debug)]
pub struct CompiledField {
    gamma: Vec<Complex64>,
    beta: Vec<Complex64>,
    alpha: f64,
    // (k, l, A_kl)
    edges: Vec<(usize, usize, f64)>,
    // exponents (a, b, c, d) of z^a zb^b w^c wb^d and coefficient
    terms: Vec<([u32; 4], Complex64)>,
}

impl CompiledField {
    fn new(sys: &NetworkSystem) -> Self {
        Self {
            gamma: sys.gamma().as_slice().to_vec(),
            beta: sys.beta.clone(),
            alpha: sys.alpha,
            edges: sys
                .edges()
                .into_iter()
                .map(|(k, l)| (k, l, sys.adjacency[k][l]))
                .collect(),
            terms: sys
                .coupling
                .terms()
                .map(|(m, c)| ([m.s()[0], m.t()[0], m.s()[1], m.t()[1]], *c))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.gamma.len()
    }

    pub fn coupling_value(&self, zk: Complex64, zl: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for ([a, b, c, d], coef) in &self.terms {
            acc += coef * zk.powu(*a) * zk.conj().powu(*b) * zl.powu(*c) * zl.conj().powu(*d);
        }
        acc
    }

    pub fn eval(&self, z: &[Complex64], out: &mut [Complex64]) {
        for k in 0..z.len() {
            out[k] = self.gamma[k] * z[k] + self.beta[k] * z[k] * z[k].norm_sqr();
        }
        for &(k, l, a) in &self.edges {
            out[k] += self.coupling_value(z[k], z[l]) * (self.alpha * a);
        }
    }
}
