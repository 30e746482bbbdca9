//! Single-step variational preparation of thermofield-double states of the
//! two-site transverse-field Ising model, and the cost functions used to
//! train it.
//!
//! The register is `|A1 A2 B1 B2>` with `A1` the most significant bit of a
//! basis index. The circuit starts from Bell pairs `(A_i, B_i)` and applies
//! four parameterised layers; [`deopt::optimize_tfd`] tunes the angles against
//! one of the [`costs::CostKind`] objectives, and [`metrics`] compares the
//! result with the ideal state on subsystem A.

pub mod costs;
pub mod density_layout;
pub mod deopt;
pub mod error;
pub mod metrics;
pub mod qcore;
pub mod tfim;

pub use costs::{CorrelatorReadings, CostKind, CostModel, PrunedElements};
pub use deopt::{derive_seed, minimize, optimize_tfd, DeConfig, OptimizationResult, TfdOptimum};
pub use error::{Error, Result};
pub use metrics::{fidelity, subsystem_proximity, trace_distance, xi_metric, ProximityPair};
pub use qcore::{ComplexScalar, DenseMatrix, EigenDecomposition, StateVector};
pub use tfim::{
    density_of, evolve_ansatz, initial_state, target_tfd, AnsatzCircuit, HamiltonianSet, ModelParams,
    PauliString, VariationalAngles,
};
