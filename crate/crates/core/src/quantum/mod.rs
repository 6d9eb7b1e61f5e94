//! Statevector simulation of the parameterized quantum core.
//!
//! Every routine is generic over [`Scalar`](crate::autodiff::Scalar), so the
//! same circuit runs on plain floats, jets and tape variables.

mod circuit;
mod state;

pub use circuit::{CircuitSpec, Gate, GateProgram, Topology};
pub use state::{half_angle, Axis, StateVector, MAX_QUBITS};
