//! Reference configurations.
//!
//! | name       | system                                                         |
//! |------------|----------------------------------------------------------------|
//! | `ring4`    | 4-node ring, `h = z conj(w) + z^2 conj(w)`, two triplet resonances |
//! | `chain3`   | 3-node path with the same coupling                             |
//! | `sixring`  | two coupled triangles, `h = z conj(w)`, `omega_2 ~ omega_5`     |
//! | `tongue`   | 4-node ring, `h = z conj(w)`, detuned pair `omega_1 = 1 + delta` |
//! | `meanfield`| Ott-Antonsen mean fields of four Kuramoto populations          |
//! | `if-ring`  | delayed integrate-and-fire ring                                |

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::normalform::NetworkSystem;
use crate::polyalg::ConjPoly;

pub const NAMES: [&str; 6] = [
    "ring4",
    "chain3",
    "sixring",
    "tongue",
    "meanfield",
    "if-ring",
];

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `z conj(w)`
pub fn coupling_linear_conj() -> ConjPoly {
    ConjPoly::monomial(&[1, 0], &[0, 1], c(1.0))
}

/// `z conj(w) + z^2 conj(w)`
pub fn coupling_quadratic_conj() -> ConjPoly {
    &coupling_linear_conj() + &ConjPoly::monomial(&[2, 0], &[0, 1], c(1.0))
}

/// Symmetric adjacency of the undirected graph with the given 0-based edges.
pub fn undirected(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; n]; n];
    for &(i, j) in edges {
        a[i][j] = 1.0;
        a[j][i] = 1.0;
    }
    a
}

pub fn ring_adjacency(n: usize) -> Vec<Vec<f64>> {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    undirected(n, &edges)
}

pub const RING4_OMEGA: [f64; 4] = [1.01, 2.5, 1.5, 2.49];
pub const RING4_LAMBDA: f64 = 0.15;
pub const RING4_ALPHA: f64 = 0.18;

/// Ring with `omega_1 - omega_2 + omega_3 ~ 0` and `omega_1 - omega_4 + omega_3 ~ 0`.
pub fn ring4() -> NetworkSystem {
    ring4_with_alpha(RING4_ALPHA)
}

pub fn ring4_with_alpha(alpha: f64) -> NetworkSystem {
    NetworkSystem::new(
        ring_adjacency(4),
        RING4_LAMBDA,
        RING4_OMEGA.to_vec(),
        coupling_quadratic_conj(),
        alpha,
    )
    .expect("ring4 preset is valid")
}

/// Path `1 - 2 - 3` with `omega_1 - omega_2 + omega_3 = delta`.
pub fn chain3() -> NetworkSystem {
    chain3_with(0.01, 0.18)
}

pub fn chain3_with(delta: f64, alpha: f64) -> NetworkSystem {
    NetworkSystem::new(
        undirected(3, &[(0, 1), (1, 2)]),
        0.15,
        vec![1.0 + delta, 2.5, 1.5],
        coupling_quadratic_conj(),
        alpha,
    )
    .expect("chain3 preset is valid")
}

/// Two triangles `{1,2,3}` and `{4,5,6}` joined by the rungs `1-4`, `2-5`,
/// `3-6`, with only `omega_2 ~ omega_5` close.
pub fn sixring() -> NetworkSystem {
    NetworkSystem::new(
        undirected(
            6,
            &[
                (0, 1),
                (0, 2),
                (1, 2),
                (3, 4),
                (3, 5),
                (4, 5),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
        ),
        0.15,
        vec![1.0, 2.0, 3.1, 4.3, 2.01, 5.6],
        coupling_linear_conj(),
        0.18,
    )
    .expect("sixring preset is valid")
}

/// Ring used for the locking tongue: `omega = (1 + delta, 1, 5, 6)`, `lambda = 1`.
pub fn tongue(delta: f64, alpha: f64) -> NetworkSystem {
    NetworkSystem::new(
        ring_adjacency(4),
        1.0,
        vec![1.0 + delta, 1.0, 5.0, 6.0],
        coupling_linear_conj(),
        alpha,
    )
    .expect("tongue preset is valid")
}

/// Looks up a network preset by name. `meanfield` is the Ott-Antonsen mean
/// field of the reference ensemble; `if-ring` has no network form.
pub fn network(name: &str) -> Result<NetworkSystem> {
    match name {
        "ring4" => Ok(ring4()),
        "chain3" => Ok(chain3()),
        "sixring" => Ok(sixring()),
        "tongue" => Ok(tongue(0.05, 0.2)),
        "meanfield" => crate::phasered::MeanFieldSpec::reference().build(),
        other => Err(Error::Config(format!(
            "unknown network preset '{other}' (known: {})",
            NAMES.join(", ")
        ))),
    }
}
