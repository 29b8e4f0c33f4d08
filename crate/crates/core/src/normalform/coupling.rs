use num_complex::Complex64;
use serde::Serialize;

use super::system::{embed, NetworkSystem, H_DEGREE};
use super::transform::{check_nonresonance, compute_p, edge_modified_coupling};
use crate::error::{Error, Result};
use crate::polyalg::{bracket_truncated, resonance_value, ConjPoly, Monomial};

/// Degree through which the emergent coupling `G_k` is retained.
pub const G_DEGREE: u32 = 4;

/// Which kind of two-edge tree produced a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TreeKind {
    /// Two in-neighbours `l`, `p` of the target (weight `A_kl A_kp`).
    First,
    /// A directed path `k <- l <- p` (weight `A_kl A_lp`).
    Second,
}

impl std::fmt::Display for TreeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TreeKind::First => write!(f, "1G"),
            TreeKind::Second => write!(f, "2G"),
        }
    }
}

/// Unweighted tree contribution `1G_k^{lp}` or `2G_k^{lp}`.
#[derive(Clone, Debug)]
pub struct TreeTerm {
    pub kind: TreeKind,
    pub k: usize,
    pub l: usize,
    pub p: usize,
    /// Adjacency product multiplying `poly` inside `G_k`.
    pub weight: f64,
    pub poly: ConjPoly,
}

/// The order-`alpha^2` coupling `G_k` of every node, together with its
/// decomposition into tree contributions. The transformed equations read
/// `du_k/dt = gamma_k u_k + beta_k u_k |u_k|^2 + alpha L_k(u) - alpha^2 G_k(u)`.
#[derive(Clone, Debug)]
pub struct CouplingDecomposition {
    pub g: Vec<ConjPoly>,
    pub trees: Vec<TreeTerm>,
}

fn coeff_of(p: &ConjPoly, m: &Monomial) -> Complex64 {
    p.coeff(m)
}

/// `G_k = ([P_k || H] - [L_k || P])` truncated at [`G_DEGREE`], computed
/// directly from brackets.
pub fn compute_g_bracket(sys: &NetworkSystem, p: &[ConjPoly]) -> Result<Vec<ConjPoly>> {
    let h = sys.assemble_h();
    let lin = sys.assemble_linear();
    (0..sys.n())
        .map(|k| {
            let a = bracket_truncated(&p[k], &h, G_DEGREE)?;
            let b = bracket_truncated(&lin[k], p, G_DEGREE)?;
            Ok(&a - &b)
        })
        .collect()
}

/// Builds `G_k` tree by tree from two-slot partial derivatives of the
/// per-edge modified coupling. Self-loops are handled because the slots are
/// differentiated before they are identified with node variables.
pub fn compute_g(sys: &NetworkSystem, eps_res: f64) -> Result<CouplingDecomposition> {
    let n = sys.n();
    let h = sys.coupling.truncate(H_DEGREE);
    let lin = sys.coupling_linear();
    let one = Complex64::new(1.0, 0.0);
    let lin_coeff = |s: [u32; 2], t: [u32; 2]| lin.coeff(&Monomial::new(s.to_vec(), t.to_vec()));
    // a z + a' zb + b w + b' wb
    let a = lin_coeff([1, 0], [0, 0]);
    let a_bar = lin_coeff([0, 0], [1, 0]);
    let b = lin_coeff([0, 1], [0, 0]);
    let b_bar = lin_coeff([0, 0], [0, 1]);

    let edges = sys.edges();
    let mut hat = vec![vec![None; n]; n];
    for &(k, l) in &edges {
        hat[k][l] = Some(edge_modified_coupling(sys, k, l, eps_res)?);
    }
    let hat_embedded = |k: usize, l: usize| -> ConjPoly {
        embed(hat[k][l].as_ref().expect("edge present"), k, l, n)
    };

    let mut trees = Vec::new();
    let mut g = vec![ConjPoly::zero(n); n];
    for &(k, l) in &edges {
        let hkl = hat[k][l].as_ref().expect("edge present");
        let d_z = embed(&hkl.partial(0, false), k, l, n);
        let d_zb = embed(&hkl.partial(0, true), k, l, n);
        let d_w = embed(&hkl.partial(1, false), k, l, n);
        let d_wb = embed(&hkl.partial(1, true), k, l, n);
        for p in 0..n {
            // first kind: the receiving slot of h^_kl moves along H_k
            if sys.adjacency[k][p] != 0.0 {
                let hkp = embed(&h, k, p, n);
                let mut poly =
                    &d_z.mul_truncated(&hkp, G_DEGREE) + &d_zb.mul_truncated(&hkp.conj(), G_DEGREE);
                if a != Complex64::default() || a_bar != Complex64::default() {
                    let hat_kp = hat_embedded(k, p).truncate(G_DEGREE);
                    poly -= &hat_kp.scale(a);
                    poly -= &hat_kp.conj().scale(a_bar);
                }
                let weight = sys.adjacency[k][l] * sys.adjacency[k][p];
                g[k] += &poly.scale(one * weight);
                trees.push(TreeTerm {
                    kind: TreeKind::First,
                    k,
                    l,
                    p,
                    weight,
                    poly,
                });
            }
            // second kind: the sending slot moves along H_l
            if sys.adjacency[l][p] != 0.0 {
                let hlp = embed(&h, l, p, n);
                let mut poly =
                    &d_w.mul_truncated(&hlp, G_DEGREE) + &d_wb.mul_truncated(&hlp.conj(), G_DEGREE);
                if b != Complex64::default() || b_bar != Complex64::default() {
                    let hat_lp = hat_embedded(l, p).truncate(G_DEGREE);
                    poly -= &hat_lp.scale(b);
                    poly -= &hat_lp.conj().scale(b_bar);
                }
                let weight = sys.adjacency[k][l] * sys.adjacency[l][p];
                g[k] += &poly.scale(one * weight);
                trees.push(TreeTerm {
                    kind: TreeKind::Second,
                    k,
                    l,
                    p,
                    weight,
                    poly,
                });
            }
        }
    }
    Ok(CouplingDecomposition { g, trees })
}

/// Contribution of one tree to a hyperedge coefficient.
#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub kind: TreeKind,
    pub l: usize,
    pub p: usize,
    pub re: f64,
    pub im: f64,
}

/// A resonant monomial surviving in the equation of node `target`.
#[derive(Clone, Debug, Serialize)]
pub struct Hyperedge {
    pub target: usize,
    #[serde(serialize_with = "ser_monomial")]
    pub monomial: Monomial,
    /// Human-readable monomial, 1-based (`z1^2 zb2 z3`).
    pub label: String,
    /// Coefficient inside `G_k`.
    #[serde(serialize_with = "ser_complex")]
    pub g_coefficient: Complex64,
    /// Coefficient of `alpha^2 * monomial` in `du_k/dt`, i.e. `-g_coefficient`.
    #[serde(serialize_with = "ser_complex")]
    pub field_coefficient: Complex64,
    /// Frequency combination `Im(resonance value)`.
    pub detuning: f64,
    /// Phase combination vector `s - t - e_k`.
    pub phase: Vec<i64>,
    pub provenance: Vec<Provenance>,
}

fn ser_complex<S: serde::Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &c.re)?;
    st.serialize_field("im", &c.im)?;
    st.end()
}

fn ser_monomial<S: serde::Serializer>(m: &Monomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Monomial", 2)?;
    st.serialize_field("s", m.s())?;
    st.serialize_field("t", m.t())?;
    st.end()
}

/// Output of the resonance filter.
#[derive(Clone, Debug, Serialize)]
pub struct Hypernetwork {
    pub n: usize,
    pub eps_res: f64,
    /// Unfiltered `G_k`.
    #[serde(skip)]
    pub g: Vec<ConjPoly>,
    /// Resonant part of `G_k` (hyperedges plus phase-neutral terms).
    #[serde(skip)]
    pub resonant: Vec<ConjPoly>,
    /// Resonant monomials with a nonzero phase combination.
    pub hyperedges: Vec<Hyperedge>,
    /// Resonant monomials whose phase combination vanishes identically
    /// (amplitude-dependent frequency corrections such as `u_k |u_l|^2`).
    pub neutral: Vec<Hyperedge>,
}

impl Hypernetwork {
    pub fn edges_of(&self, k: usize) -> impl Iterator<Item = &Hyperedge> {
        self.hyperedges.iter().filter(move |e| e.target == k)
    }

    pub fn is_empty(&self) -> bool {
        self.hyperedges.is_empty()
    }
}

/// Keeps only the monomials of `G_k` whose frequency combination is within
/// `eps_res` of zero and records which trees produced them.
pub fn filter_resonant(
    sys: &NetworkSystem,
    dec: &CouplingDecomposition,
    eps_res: f64,
) -> Hypernetwork {
    let n = sys.n();
    let gamma = sys.gamma();
    let mut hyperedges = Vec::new();
    let mut neutral = Vec::new();
    let mut resonant = vec![ConjPoly::zero(n); n];
    for (k, gk) in dec.g.iter().enumerate() {
        for (m, c) in gk.terms() {
            let detuning = resonance_value(m, k, &gamma).im;
            if detuning.abs() > eps_res {
                continue;
            }
            resonant[k].add_term(m.clone(), *c);
            let mut phase = m.phase_vector();
            phase[k] -= 1;
            let provenance = dec
                .trees
                .iter()
                .filter(|t| t.k == k && t.weight != 0.0)
                .filter_map(|t| {
                    let v = coeff_of(&t.poly, m) * t.weight;
                    (v != Complex64::default()).then_some(Provenance {
                        kind: t.kind,
                        l: t.l,
                        p: t.p,
                        re: v.re,
                        im: v.im,
                    })
                })
                .collect();
            let edge = Hyperedge {
                target: k,
                monomial: m.clone(),
                label: m.to_string(),
                g_coefficient: *c,
                field_coefficient: -*c,
                detuning,
                phase: phase.clone(),
                provenance,
            };
            if phase.iter().all(|&x| x == 0) {
                neutral.push(edge);
            } else {
                hyperedges.push(edge);
            }
        }
    }
    Hypernetwork {
        n,
        eps_res,
        g: dec.g.clone(),
        resonant,
        hyperedges,
        neutral,
    }
}

/// Full derivation: pairwise non-resonance is required for the transform,
/// after which the order-`alpha^2` coupling is filtered for resonances.
pub fn algorithm1(sys: &NetworkSystem, eps_res: f64) -> Result<Hypernetwork> {
    let report = check_nonresonance(sys, eps_res);
    if let Some(bad) = report.failures().next() {
        return Err(Error::ResonantTerm {
            monomial: format!("{} on edge {} <- {}", bad.monomial, bad.k + 1, bad.l + 1),
            node: bad.k + 1,
            re: sys.lambda[bad.k],
            im: bad.value,
            eps: eps_res,
        });
    }
    compute_p(sys, eps_res)?;
    let dec = compute_g(sys, eps_res)?;
    Ok(filter_resonant(sys, &dec, eps_res))
}
