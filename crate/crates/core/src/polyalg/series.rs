use num_complex::Complex64;

use super::{bracket_truncated, ConjPoly};
use crate::error::{Error, Result};

/// Truncated power series `sum_{j<=order} alpha^j P_j` in a real formal
/// parameter `alpha`, with polynomial coefficients.
///
/// `alpha` commutes with everything and is real, so conjugation acts on the
/// coefficients only.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaSeries {
    n: usize,
    coeffs: Vec<ConjPoly>,
}

impl AlphaSeries {
    pub fn zero(n: usize, order: usize) -> Self {
        Self {
            n,
            coeffs: vec![ConjPoly::zero(n); order + 1],
        }
    }

    /// `alpha^power * p`, truncated at `order`.
    pub fn term(p: ConjPoly, power: usize, order: usize) -> Self {
        let mut s = Self::zero(p.n(), order);
        if power <= order {
            s.coeffs[power] = p;
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<ConjPoly>) -> Result<Self> {
        let n = coeffs.first().map(ConjPoly::n).ok_or(Error::Config(
            "an alpha series needs at least one coefficient".into(),
        ))?;
        if let Some(bad) = coeffs.iter().find(|c| c.n() != n) {
            return Err(Error::Dimension {
                expected: n,
                found: bad.n(),
            });
        }
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `alpha^j` (zero beyond the truncation order).
    pub fn coeff(&self, j: usize) -> ConjPoly {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| ConjPoly::zero(self.n))
    }

    pub fn coeffs(&self) -> &[ConjPoly] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self {
            n: self.n,
            coeffs: (0..=order)
                .map(|j| &self.coeffs[j] + &other.coeffs[j])
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self {
            n: self.n,
            coeffs: (0..=order)
                .map(|j| &self.coeffs[j] - &other.coeffs[j])
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(ConjPoly::conj).collect(),
        }
    }

    pub fn truncate_degree(&self, max_degree: u32) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|p| p.truncate(max_degree)).collect(),
        }
    }

    /// Product truncated in both `alpha` order and polynomial degree.
    pub fn mul_truncated(&self, other: &Self, max_degree: u32) -> Self {
        let order = self.order().min(other.order());
        let mut out = Self::zero(self.n, order);
        for a in 0..=order {
            if self.coeffs[a].is_zero() {
                continue;
            }
            for b in 0..=(order - a) {
                if other.coeffs[b].is_zero() {
                    continue;
                }
                let prod = self.coeffs[a].mul_truncated(&other.coeffs[b], max_degree);
                out.coeffs[a + b] += &prod;
            }
        }
        out
    }

    /// `[R||S]` extended bilinearly to series (valid because `alpha` is real).
    pub fn bracket(r: &Self, s: &[Self], max_degree: u32) -> Result<Self> {
        let order = s.iter().map(Self::order).fold(r.order(), usize::min);
        let mut out = Self::zero(r.n, order);
        for a in 0..=order {
            if r.coeffs[a].is_zero() {
                continue;
            }
            for b in 0..=(order - a) {
                let field: Vec<ConjPoly> = s.iter().map(|si| si.coeffs[b].clone()).collect();
                if field.iter().all(ConjPoly::is_zero) {
                    continue;
                }
                out.coeffs[a + b] += &bracket_truncated(&r.coeffs[a], &field, max_degree)?;
            }
        }
        Ok(out)
    }

    /// Composition `R(subs)`, with `conj(z_j)` replaced by `conj(subs_j)`.
    pub fn substitute(r: &Self, subs: &[Self], max_degree: u32) -> Result<Self> {
        if subs.len() != r.n {
            return Err(Error::Dimension {
                expected: r.n,
                found: subs.len(),
            });
        }
        let n_out = subs.first().map(Self::n).unwrap_or(r.n);
        let order = subs.iter().map(Self::order).fold(r.order(), usize::min);
        let conj: Vec<Self> = subs.iter().map(Self::conj).collect();
        let mut powers: Vec<[Vec<Self>; 2]> = vec![[Vec::new(), Vec::new()]; subs.len()];
        let mut out = Self::zero(n_out, order);
        for (a, pa) in r.coeffs.iter().enumerate().take(order + 1) {
            for (m, c) in pa.terms() {
                let mut prod = Self::term(ConjPoly::constant(n_out, *c), 0, order - a);
                for j in 0..r.n {
                    for (is_conj, e) in [(false, m.s()[j]), (true, m.t()[j])] {
                        if e == 0 {
                            continue;
                        }
                        let base = if is_conj { &conj[j] } else { &subs[j] };
                        let list = &mut powers[j][is_conj as usize];
                        while list.len() < e as usize {
                            let next = match list.last() {
                                None => base.truncate_degree(max_degree),
                                Some(prev) => prev.mul_truncated(base, max_degree),
                            };
                            list.push(next);
                        }
                        prod = prod.mul_truncated(&list[e as usize - 1], max_degree);
                    }
                }
                for (b, pb) in prod.coeffs.iter().enumerate() {
                    if a + b <= order {
                        out.coeffs[a + b] += pb;
                    }
                }
            }
        }
        Ok(out)
    }
}
