//! Discrete-time coined quantum walks on `N = 2^n` cycles.
//!
//! The walk operator is built as a gate circuit in one of two styles:
//! multi-controlled inverters over an ancilla register, or ancilla-free
//! rotation networks. Circuits are simulated exactly on a dense statevector,
//! optionally with stochastic Pauli noise, and compared through gate counts,
//! qubit counts, execution-time estimates and quantum volume.

pub mod analyze;
pub mod circuit;
pub mod cli;
pub mod decompose;
pub mod error;
pub mod gates;
pub mod resources;
pub mod simulate;
pub mod state;
pub mod walk;

pub use circuit::{circuit_unitary, Circuit, Control, Flavor, GateOp, Polarity, RegisterLayout};
pub use error::{Result, WalkError};
pub use gates::{GateKind, GateMatrix};
pub use simulate::{batch_experiment, run_exact, run_shots, ExperimentResult, NoiseParams};
pub use state::{Distribution, StateVector};
pub use walk::{build_step, build_walk, WalkSpec};
