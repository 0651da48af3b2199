//! Phase-space and entanglement observables.

pub mod entropy;
pub mod husimi;
pub mod stability;

pub use entropy::{
    dogra_linear_entropy, entropy_series, linear_entropy, min_entropy_scan, reduced_qubit,
    von_neumann_entropy, EntropyKind, ReducedQubit,
};
pub use husimi::{husimi, phi_grid, theta_grid, HusimiField};
pub use stability::{
    mean_landscape_vs_spin, stability_landscape, EntropyLandscape, LandscapeMeta, MeanEntropyRow,
    StabilityConfig,
};
