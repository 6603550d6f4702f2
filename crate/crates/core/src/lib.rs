//! Simulation of a regularly pumped micromaser with injected atomic
//! coherence.
//!
//! A truncated Fock-space density matrix is evolved under alternating
//! one-atom Jaynes-Cummings gain kicks and exact zero-temperature cavity
//! decay. With the interaction time at a trapping value, superpositions of
//! tangent and cotangent block states are period-2 under the pump: their
//! inter-block coherences flip sign on every atom, so the electric field
//! oscillates between two values, and damping turns the steady oscillation
//! into a slowly decaying transient.
//!
//! Module map:
//! - [`fock`]: state containers and field observables
//! - [`jaynes_cummings`]: the gain kick as a Kraus pair and as a pure map
//! - [`states`]: trapping blocks and tangent / cotangent state builders
//! - [`damping`]: exact decay map plus an RK4 master-equation oracle
//! - [`simulator`]: the pump loop and its recorded time series

pub mod damping;
pub mod error;
pub mod fock;
pub mod jaynes_cummings;
pub mod simulator;
pub mod states;

pub use damping::{apply_decay, lindblad_oracle, DecayParams};
pub use error::{Error, Result};
pub use fock::{
    electric_field_expectation, photon_distribution, pure_to_density,
    quadrature_squared_expectations, DensityMatrix, FieldUnits, PureFieldState,
};
pub use jaynes_cummings::{
    apply_gain, build_gain_channel, evolve_joint_pure, AtomState, GainChannel, RabiTable,
};
pub use simulator::{
    oscillation_envelope, prepare_initial_state, run, step, AtomRecord, DecayWindow, Envelope,
    RunOutput, SeriesField, SimConfig, TimeSeries,
};
pub use states::{
    build_block_state, detect_blocks, optimize_seed_phases, superpose, BlockKind, BlockWeight,
    PhaseObjective, TrappingBlock,
};

pub use num_complex::Complex64;
