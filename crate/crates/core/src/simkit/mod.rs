//! Time integration of the original networks, their normal forms and phase
//! models, plus the two microscopic models (a Kuramoto ensemble and a delayed
//! integrate-and-fire ring) and the synchronization-tongue sweep.

mod ensemble;
mod ifring;
mod integrate;
mod network;
mod tongue;
mod trajectory;

pub use ensemble::{
    initial_order, integrate_microscopic, order_parameter, EnsembleConfig, EnsembleRun,
};
pub use ifring::{integrate_if_ring, IfConfig};
pub use integrate::{integrate_adaptive, integrate_fixed, Rk4, State, Tolerance};
pub use network::{
    integrate_network, integrate_phase_model, integrate_polynomial_field, integrate_slow_phase,
    normal_form_field, PolynomialField,
};
pub use tongue::{
    fit_sqrt_law, locking_boundary, phase_locking_error, sweep_sync_tongue, thread_count,
    TongueCell, TongueSweep,
};
pub use trajectory::{unwrap_phase, ComplexTrajectory, RealTrajectory, Trajectory};
