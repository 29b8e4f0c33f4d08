//! Network systems, the two near-identity transformations that remove
//! pairwise coupling, and the emergent higher-order coupling they leave.

mod cancel;
mod coupling;
mod linear;
mod system;
mod transform;

pub use cancel::{cancellation_check, CancellationReport};
pub use coupling::{
    algorithm1, compute_g, compute_g_bracket, filter_resonant, CouplingDecomposition, Hyperedge,
    Hypernetwork, Provenance, TreeKind, TreeTerm, G_DEGREE,
};
pub use linear::{linear_frequency_shift, linear_matrix, FrequencyShift};
pub use system::{embed, CompiledField, NetworkSystem, SystemConfig, H_DEGREE};
pub use transform::{
    check_nonresonance, compute_p, compute_second_transform, edge_modified_coupling,
    homological_residual, EdgeCondition, NonResonanceReport, SecondTransform, TransformSeries,
};
