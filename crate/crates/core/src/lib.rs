//! Derive, simulate and recover emergent hypernetwork dynamics in networks
//! of weakly coupled oscillators close to a Hopf bifurcation.
//!
//! * [`polyalg`]: polynomials in complex variables and their conjugates.
//! * [`normalform`]: network systems, near-identity transformations and the
//!   resonant hyperedges they leave behind.
//! * [`phasered`]: phase reduction and slow-phase vector fields.
//! * [`simkit`]: integrators for oscillator networks, phase models,
//!   Kuramoto ensembles and delayed integrate-and-fire rings.
//! * [`recover`]: phase extraction, filtering and sparse regression.
//! * [`presets`]: the reference configurations used by the CLI and tests.

pub mod error;
pub mod normalform;
pub mod phasered;
pub mod polyalg;
pub mod presets;
pub mod recover;
pub mod simkit;

pub use error::{Error, Result};
