use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::state::{half_angle, Axis, StateVector, MAX_QUBITS};
use crate::autodiff::Scalar;
use crate::error::{shape, Error, Result};

/// Entanglement pattern of the parameterized layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    /// Ring of controlled-RX entanglers.
    Cascade,
    /// Controlled-RZ between every ordered qubit pair.
    CrossMesh,
    /// Nearest-neighbour rotation blocks followed by CNOT.
    Alternate,
}

impl Topology {
    pub const ALL: [Topology; 3] = [Topology::Cascade, Topology::CrossMesh, Topology::Alternate];

    pub fn name(self) -> &'static str {
        match self {
            Topology::Cascade => "cascade",
            Topology::CrossMesh => "crossmesh",
            Topology::Alternate => "alternate",
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "cascade" => Ok(Topology::Cascade),
            "crossmesh" => Ok(Topology::CrossMesh),
            "alternate" | "layered" => Ok(Topology::Alternate),
            _ => Err(Error::Config(format!(
                "unknown topology '{s}' (valid: cascade, crossmesh, alternate)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitSpec {
    pub topology: Topology,
    pub qubits: usize,
    pub layers: usize,
}

impl CircuitSpec {
    pub fn new(topology: Topology, qubits: usize, layers: usize) -> Result<Self> {
        if qubits < 2 {
            return Err(Error::TooFewQubits(qubits));
        }
        if qubits > MAX_QUBITS {
            return Err(Error::QubitCount(qubits));
        }
        if layers == 0 {
            return Err(Error::Config("circuit needs at least one layer".into()));
        }
        Ok(Self {
            topology,
            qubits,
            layers,
        })
    }

    pub fn parameter_count(&self) -> usize {
        let (dq, l) = (self.qubits, self.layers);
        match self.topology {
            Topology::Cascade => 3 * dq * l,
            Topology::CrossMesh => (dq * dq + 3 * dq) * l,
            Topology::Alternate => 4 * (dq - 1) * l,
        }
    }

    /// Depth as conventionally quoted for each topology (closed form, not a
    /// scheduling computation).
    pub fn reported_depth(&self) -> usize {
        let (dq, l) = (self.qubits, self.layers);
        match self.topology {
            Topology::Cascade => (dq + 2) * l,
            Topology::CrossMesh => (dq * dq - dq + 4) * l,
            Topology::Alternate => 6 * l,
        }
    }

    pub fn program(&self) -> GateProgram {
        GateProgram::build(*self)
    }

    /// Uniform angles on `[0, 2π)`.
    pub fn init_params<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.parameter_count())
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    Rotation {
        qubit: usize,
        axis: Axis,
        slot: usize,
    },
    ControlledRotation {
        control: usize,
        target: usize,
        axis: Axis,
        slot: usize,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

/// Ordered gate list with parameter slots into `theta2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateProgram {
    spec: CircuitSpec,
    gates: Vec<Gate>,
    slots: usize,
}

impl GateProgram {
    fn build(spec: CircuitSpec) -> Self {
        let dq = spec.qubits;
        let mut gates = Vec::new();
        let mut slot = 0usize;
        let mut next = || {
            slot += 1;
            slot - 1
        };
        for _ in 0..spec.layers {
            match spec.topology {
                Topology::Cascade => {
                    for qubit in 0..dq {
                        for axis in [Axis::X, Axis::Z] {
                            gates.push(Gate::Rotation { qubit, axis, slot: next() });
                        }
                    }
                    for q in 0..dq {
                        gates.push(Gate::ControlledRotation {
                            control: q,
                            target: (q + 1) % dq,
                            axis: Axis::X,
                            slot: next(),
                        });
                    }
                }
                Topology::CrossMesh => {
                    for qubit in 0..dq {
                        for axis in [Axis::X, Axis::Y, Axis::Z, Axis::X] {
                            gates.push(Gate::Rotation { qubit, axis, slot: next() });
                        }
                    }
                    for control in 0..dq {
                        for target in (0..dq).filter(|&t| t != control) {
                            gates.push(Gate::ControlledRotation {
                                control,
                                target,
                                axis: Axis::Z,
                                slot: next(),
                            });
                        }
                    }
                }
                Topology::Alternate => {
                    for i in 0..dq - 1 {
                        for qubit in [i, i + 1] {
                            for axis in [Axis::Y, Axis::Z] {
                                gates.push(Gate::Rotation { qubit, axis, slot: next() });
                            }
                        }
                        gates.push(Gate::Cnot {
                            control: i,
                            target: i + 1,
                        });
                    }
                }
            }
        }
        let slots = next();
        debug_assert_eq!(slots, spec.parameter_count());
        Self { spec, gates, slots }
    }

    pub fn spec(&self) -> &CircuitSpec {
        &self.spec
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn parameter_slots(&self) -> usize {
        self.slots
    }

    pub fn cnot_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Cnot { .. }))
            .count()
    }

    /// `cos(θ/2), sin(θ/2)` per slot, shareable across evaluations.
    pub fn prepare<S: Scalar>(&self, theta2: &[S]) -> Result<Vec<(S, S)>> {
        shape("circuit parameters", self.slots, theta2.len())?;
        Ok(theta2.iter().map(half_angle).collect())
    }

    /// Runs the gate list on `state` using prepared half-angle pairs.
    pub fn apply_prepared<S: Scalar>(
        &self,
        state: &mut StateVector<S>,
        prepared: &[(S, S)],
    ) -> Result<()> {
        shape("prepared circuit parameters", self.slots, prepared.len())?;
        shape("state qubits", self.spec.qubits, state.qubits())?;
        for g in &self.gates {
            match *g {
                Gate::Rotation { qubit, axis, slot } => {
                    let (c, s) = &prepared[slot];
                    state.apply_rotation_cs(qubit, axis, c, s)?;
                }
                Gate::ControlledRotation {
                    control,
                    target,
                    axis,
                    slot,
                } => {
                    let (c, s) = &prepared[slot];
                    state.apply_controlled_rotation_cs(control, target, axis, c, s)?;
                }
                Gate::Cnot { control, target } => state.apply_cnot(control, target)?,
            }
        }
        Ok(())
    }

    /// Embedding, parameterized layers and Pauli-Z readout with prepared
    /// angles.
    pub fn run_prepared<S: Scalar>(&self, prepared: &[(S, S)], features: &[S]) -> Result<Vec<S>> {
        shape("quantum features", self.spec.qubits, features.len())?;
        let mut state = StateVector::zero(self.spec.qubits, &features[0])?;
        state.angle_embed(features)?;
        self.apply_prepared(&mut state, prepared)?;
        Ok(state.expect_z())
    }

    /// `Y_q = (⟨Z_0⟩, …, ⟨Z_{dq-1}⟩)` of the embedded, parameterized state.
    pub fn run<S: Scalar>(&self, theta2: &[S], features: &[S]) -> Result<Vec<S>> {
        let prepared = self.prepare(theta2)?;
        self.run_prepared(&prepared, features)
    }
}
