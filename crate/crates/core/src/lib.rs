//! Exact dense simulation of how a qubit's information spreads into a star of
//! environment qubits when the system Hamiltonian does not commute with the
//! dephasing coupling.
//!
//! The crate is organised bottom-up:
//!
//! * [`qcore`]: dense states, partial traces, Hermitian eigendecomposition,
//!   propagators, entropies and state distances.
//! * [`model`]: the spin-star Hamiltonian, initial states and trajectories.
//! * [`infotheory`]: Holevo χ with system-basis optimisation, two-sided
//!   accessible information and quantum mutual information.
//! * [`redundancy`]: redundancy of the joint state and the selection of the
//!   time of maximum redundancy.
//! * [`sbs`]: spectrum-broadcast decomposition and pointer-state extraction.
//! * [`experiments`]: declarative figure sweeps, CSV tables and SVG plots.

pub mod error;
pub mod experiments;
pub mod infotheory;
pub mod model;
pub mod optimize;
pub mod qcore;
pub mod redundancy;
pub mod sbs;
pub mod tolerances;

pub use error::{Error, Result};
pub use experiments::{
    builtin_figure, builtin_figures, emit_plot, emit_table, read_table, run_sweep, write_table, Panel, Quantity,
    SweepRecord, SweepSpec, TimeSelection,
};
pub use infotheory::{
    accessible_mi_two_sided, condition_on_system, holevo_chi, holevo_chi_of_state, quantum_mi,
    AccessibleInfo, Conditioning, HolevoResult, MeasurementBasis,
};
pub use model::{
    build_hamiltonian, commutator_norm, evolve_trajectory, initial_state, Evolver,
    InitialScenario, ModelParams, TimeGrid, Trajectory,
};
pub use qcore::{
    entropy, fidelity_pure, herm_eig, partial_trace, propagator, tensor, trace_distance,
    uhlmann_fidelity, CMatrix, CVector, DensityMatrix, HermitianEig, QuantumState, StateVector,
    SubsystemLayout, C64,
};
pub use redundancy::{
    max_redundancy_time, redundancy, redundancy_brute_oracle, redundancy_of_state, MaxRedundancy, Quantifier,
    RedundancyConfig, RedundancyResult, ThresholdMode,
};
pub use sbs::{
    extract_pointer_basis, extract_pointer_basis_of_state, pointer_fidelity, pointer_fidelity_of_state,
    sbs_decompose, PointerBasis, SbsReport,
};
