use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::monomial::Monomial;
use crate::error::{Error, Result};

/// A complex polynomial in `z_1..z_n` and their conjugates.
///
/// Terms are kept canonical: no stored coefficient is exactly zero and each
/// exponent vector appears once. Tiny but nonzero coefficients are kept.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjPoly {
    n: usize,
    terms: BTreeMap<Monomial, Complex64>,
}

impl ConjPoly {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Monomial::one(n), c);
        p
    }

    /// `z_j`
    pub fn var(n: usize, j: usize) -> Self {
        Self::from_monomial(Monomial::var(n, j), Complex64::new(1.0, 0.0))
    }

    /// `conj(z_j)`
    pub fn conj_var(n: usize, j: usize) -> Self {
        Self::from_monomial(Monomial::conj_var(n, j), Complex64::new(1.0, 0.0))
    }

    pub fn from_monomial(m: Monomial, c: Complex64) -> Self {
        let mut p = Self::zero(m.n());
        p.add_term(m, c);
        p
    }

    /// Convenience constructor from exponent slices.
    pub fn monomial(s: &[u32], t: &[u32], c: Complex64) -> Self {
        Self::from_monomial(Monomial::new(s.to_vec(), t.to_vec()), c)
    }

    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (Monomial, Complex64)>,
    ) -> Result<Self> {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            if m.n() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: m.n(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    /// Adds `c * m`, removing the entry if the sum is exactly zero.
    pub fn add_term(&mut self, m: Monomial, c: Complex64) {
        debug_assert_eq!(m.n(), self.n);
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = *o.get() + c;
                if sum == Complex64::new(0.0, 0.0) {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.mul_truncated(other, u32::MAX))
    }

    /// Product keeping only terms of total degree `<= max_degree`.
    pub fn mul_truncated(&self, other: &Self, max_degree: u32) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch in product");
        let mut out = Self::zero(self.n);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > max_degree {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da + mb.degree() > max_degree {
                    continue;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.n);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    /// Complex conjugate: swaps `(s, t)` and conjugates coefficients.
    pub fn conj(&self) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.conj(), c.conj()))
                .collect(),
        }
    }

    pub fn truncate(&self, max_degree: u32) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_degree)
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
        }
    }

    /// Part of total degree exactly `d`.
    pub fn homogeneous(&self, d: u32) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
        }
    }

    /// Keeps the terms selected by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial, &Complex64) -> bool) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, c)| keep(m, c))
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
        }
    }

    /// `(lower degree, degree)`; errors on the zero polynomial.
    pub fn degree_bounds(&self) -> Result<(u32, u32)> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = it.next().ok_or(Error::UndefinedDegree)?;
        Ok(it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
    }

    /// Largest coefficient modulus, 0 for the zero polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.n, "evaluation point has wrong dimension");
        self.terms.iter().map(|(m, c)| c * m.evaluate(z)).sum()
    }

    /// Formal partial derivative with respect to `z_j` (or `conj(z_j)` when
    /// `conj` is true), treating the two as independent variables.
    pub fn partial(&self, j: usize, conj: bool) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let e = if conj { m.t()[j] } else { m.s()[j] };
            if let Some(q) = m.div_var(j, conj) {
                out.add_term(q, c * e as f64);
            }
        }
        out
    }

    /// Re-indexes variables: variable `j` of `self` becomes variable `map[j]`
    /// of an `n_out`-variable polynomial. Several variables may map to the
    /// same target, in which case exponents add.
    pub fn relabel(&self, map: &[usize], n_out: usize) -> Self {
        assert_eq!(map.len(), self.n);
        let mut out = Self::zero(n_out);
        for (m, c) in &self.terms {
            let mut s = vec![0u32; n_out];
            let mut t = vec![0u32; n_out];
            for (j, &target) in map.iter().enumerate() {
                s[target] += m.s()[j];
                t[target] += m.t()[j];
            }
            out.add_term(Monomial::new(s, t), *c);
        }
        out
    }

    /// Largest coefficient-wise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other).max_abs_coeff()
    }
}

impl<'a> Add<&'a ConjPoly> for &'a ConjPoly {
    type Output = ConjPoly;
    fn add(self, rhs: &ConjPoly) -> ConjPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a ConjPoly> for &'a ConjPoly {
    type Output = ConjPoly;
    fn sub(self, rhs: &ConjPoly) -> ConjPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&ConjPoly> for ConjPoly {
    fn add_assign(&mut self, rhs: &ConjPoly) {
        assert_eq!(self.n, rhs.n, "dimension mismatch in sum");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), *c);
        }
    }
}

impl SubAssign<&ConjPoly> for ConjPoly {
    fn sub_assign(&mut self, rhs: &ConjPoly) {
        assert_eq!(self.n, rhs.n, "dimension mismatch in difference");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -*c);
        }
    }
}

impl<'a> Mul<&'a ConjPoly> for &'a ConjPoly {
    type Output = ConjPoly;
    fn mul(self, rhs: &ConjPoly) -> ConjPoly {
        self.mul_truncated(rhs, u32::MAX)
    }
}

impl Neg for &ConjPoly {
    type Output = ConjPoly;
    fn neg(self) -> ConjPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    s: Vec<u32>,
    t: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    n: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for ConjPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr {
                    s: m.s().to_vec(),
                    t: m.t().to_vec(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ConjPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(deserializer)?;
        let mut p = ConjPoly::zero(repr.n);
        for term in repr.terms {
            if term.s.len() != repr.n || term.t.len() != repr.n {
                return Err(D::Error::custom(format!(
                    "term exponents must have length {}",
                    repr.n
                )));
            }
            p.add_term(
                Monomial::new(term.s, term.t),
                Complex64::new(term.re, term.im),
            );
        }
        Ok(p)
    }
}

impl std::fmt::Display for ConjPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({:.6}{:+.6}i) {}", c.re, c.im, m))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
