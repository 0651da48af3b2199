//! Quantum kicked top simulation.
//!
//! The crate builds the spin-`j` representation of the kicked top Floquet
//! operator, detects state-independent temporal recurrences (powers of the
//! Floquet operator proportional to the identity), and computes the
//! phase-space and entanglement observables used to compare the quantum
//! dynamics against the classical stroboscopic map.
//!
//! All operators are dense and stored in the descending-`m` basis: row and
//! column `k` correspond to the magnetic quantum number `m = j - k`.
//!
//! ```
//! use kicktop::{FloquetSpec, KappaClass, SpinParams, build_floquet, detect_period};
//!
//! let spin = SpinParams::new(1.5).unwrap();
//! let u = build_floquet(&FloquetSpec::new(spin, KappaClass::PiJ.kappa(spin)));
//! let report = detect_period(&u, 200, 1e-10);
//! assert_eq!(report.period, Some(12));
//! ```

pub mod classical;
pub mod error;
pub mod export;
pub mod floquet;
pub mod kappa;
pub mod observables;
pub mod operator;
pub mod recurrence;
pub mod spin;
pub mod verify;

pub use classical::{classical_step, stroboscopic_map, ClassicalPoint};
pub use error::{Error, Result};
pub use floquet::{
    apply_kicks, build_floquet, build_perturbed, kick_iter, matrix_power, FloquetSpec,
    PerturbedSpec,
};
pub use kappa::KappaClass;
pub use observables::{
    dogra_linear_entropy, husimi, linear_entropy, mean_landscape_vs_spin, min_entropy_scan,
    reduced_qubit, stability_landscape, von_neumann_entropy, EntropyKind, EntropyLandscape,
    HusimiField, ReducedQubit, StabilityConfig,
};
pub use operator::{DenseOperator, OperatorKind, StateVector};
pub use recurrence::{
    detect_period, entropy_sequence_kappa_shift, identity_error, reproduce_table,
    search_rational_kappa, state_orbit_period, RecurrenceReport, SearchConfig, SearchRow, TableRow,
};
pub use spin::{
    build_angular_momentum, coherent_state, dicke_phase_table, rotation_y, twist, AngularMomentum,
    CoherentParams, Parity, SpinParams,
};
pub use verify::{IdentityCheck, IdentityEntry};

/// Default tolerance for derived identities and recurrence detection.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
