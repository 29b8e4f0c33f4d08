use std::cmp::Ordering;
use std::fmt;

/// Exponents of a monomial `z^s * conj(z)^t` in `n` complex variables.
///
/// Ordering is graded lexicographic: lower total degree first, then the
/// concatenated vector `(s, t)` compared lexicographically with larger
/// exponents first. This is the order used for serialization.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    s: Vec<u32>,
    t: Vec<u32>,
}

impl Monomial {
    /// Builds a monomial from holomorphic exponents `s` and antiholomorphic
    /// exponents `t`. Panics if the lengths differ.
    pub fn new(s: Vec<u32>, t: Vec<u32>) -> Self {
        assert_eq!(s.len(), t.len(), "exponent vectors must have equal length");
        Self { s, t }
    }

    pub fn one(n: usize) -> Self {
        Self {
            s: vec![0; n],
            t: vec![0; n],
        }
    }

    /// The monomial `z_j`.
    pub fn var(n: usize, j: usize) -> Self {
        let mut m = Self::one(n);
        m.s[j] = 1;
        m
    }

    /// The monomial `conj(z_j)`.
    pub fn conj_var(n: usize, j: usize) -> Self {
        let mut m = Self::one(n);
        m.t[j] = 1;
        m
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    pub fn s(&self) -> &[u32] {
        &self.s
    }

    pub fn t(&self) -> &[u32] {
        &self.t
    }

    pub fn degree(&self) -> u32 {
        self.s.iter().sum::<u32>() + self.t.iter().sum::<u32>()
    }

    /// Swaps holomorphic and antiholomorphic exponents.
    pub fn conj(&self) -> Self {
        Self {
            s: self.t.clone(),
            t: self.s.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n(), other.n());
        Self {
            s: self.s.iter().zip(&other.s).map(|(a, b)| a + b).collect(),
            t: self.t.iter().zip(&other.t).map(|(a, b)| a + b).collect(),
        }
    }

    /// Divides by `z_j` (when `conj` is false) or `conj(z_j)`; returns `None`
    /// if that variable does not occur.
    pub fn div_var(&self, j: usize, conj: bool) -> Option<Self> {
        let mut m = self.clone();
        let e = if conj { &mut m.t[j] } else { &mut m.s[j] };
        if *e == 0 {
            return None;
        }
        *e -= 1;
        Some(m)
    }

    /// Integer phase vector of the monomial: `s - t`. For a node equation
    /// `k`, the oscillating phase of `m / z_k` is `phase_vector - e_k`.
    pub fn phase_vector(&self) -> Vec<i64> {
        self.s
            .iter()
            .zip(&self.t)
            .map(|(&a, &b)| a as i64 - b as i64)
            .collect()
    }

    pub fn evaluate(&self, z: &[num_complex::Complex64]) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(1.0, 0.0);
        for (j, zj) in z.iter().enumerate() {
            if self.s[j] > 0 {
                acc *= zj.powu(self.s[j]);
            }
            if self.t[j] > 0 {
                acc *= zj.conj().powu(self.t[j]);
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let a = self.s.iter().chain(&self.t);
            let b = other.s.iter().chain(&other.t);
            // larger exponents come first within a degree
            b.cmp(a)
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    /// Writes e.g. `z1^2 zb2 z3` (1-based indices, `zb` for conjugates).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for j in 0..self.n() {
            for (e, name) in [(self.s[j], "z"), (self.t[j], "zb")] {
                match e {
                    0 => {}
                    1 => parts.push(format!("{name}{}", j + 1)),
                    _ => parts.push(format!("{name}{}^{e}", j + 1)),
                }
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}
