// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

//! Circuit intermediate representation.
//!
//! A [`Circuit`] is a flat, ordered list of [`Gate`]s over a single register
//! of logical qubits. There are no classical bits and no measurements: every
//! consumer works on the final quantum state.

mod gate;
mod qasm;

pub use gate::{gate_unitary, Gate, GateKind};
pub use qasm::{emit_qasm, parse_qasm, QasmError, QasmErrorKind};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CircuitError {
    #[error("{kind} expects {expected} qubit operand(s), got {got}")]
    WrongArity { kind: GateKind, expected: usize, got: usize },
    #[error("{kind} applied twice to qubit {qubit}")]
    DuplicateQubit { kind: GateKind, qubit: usize },
    #[error("{0} requires an angle")]
    MissingAngle(GateKind),
    #[error("{0} does not take an angle")]
    UnexpectedAngle(GateKind),
    #[error("{0} angle is not finite")]
    NonFiniteAngle(GateKind),
    #[error("qubit {qubit} out of range for a {width}-qubit circuit")]
    QubitOutOfRange { qubit: usize, width: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    name: String,
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(name: impl Into<String>, num_qubits: usize) -> Circuit {
        Circuit { name: name.into(), num_qubits, gates: Vec::new() }
    }

    /// Builds a circuit from a gate list, validating every gate against the width.
    pub fn from_gates(
        name: impl Into<String>,
        num_qubits: usize,
        gates: impl IntoIterator<Item = Gate>,
    ) -> Result<Circuit, CircuitError> {
        let mut circuit = Circuit::new(name, num_qubits);
        for g in gates {
            circuit.push(g)?;
        }
        Ok(circuit)
    }

    /// Appends a gate after checking its operands fit the register.
    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        if let Some(&qubit) = gate.qubits().iter().find(|&&q| q >= self.num_qubits) {
            return Err(CircuitError::QubitOutOfRange { qubit, width: self.num_qubits });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<(), CircuitError> {
        gates.into_iter().try_for_each(|g| self.push(g))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Number of gates of `kind`, or of all gates when `kind` is `None`.
    pub fn count_gates(&self, kind: Option<GateKind>) -> usize {
        match kind {
            None => self.gates.len(),
            Some(k) => self.gates.iter().filter(|g| g.kind() == k).count(),
        }
    }

    pub fn count_prunable(&self) -> usize {
        self.gates.iter().filter(|g| g.kind().is_prunable()).count()
    }

    pub fn is_basis_only(&self) -> bool {
        self.gates.iter().all(|g| g.kind().is_basis())
    }
}

/// Free-function form of [`Circuit::count_gates`].
pub fn count_gates(circuit: &Circuit, kind: Option<GateKind>) -> usize {
    circuit.count_gates(kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let c = Circuit::from_gates("t", 2, [Gate::cx(0, 1), Gate::cx(1, 0), Gate::rz(0.3, 0)]).unwrap();
        assert_eq!(c.count_gates(Some(GateKind::Cx)), 2);
        assert_eq!(c.count_gates(None), 3);
        assert_eq!(Circuit::new("e", 3).count_gates(None), 0);
    }

    #[test]
    fn push_rejects_out_of_range() {
        let mut c = Circuit::new("t", 2);
        assert_eq!(c.push(Gate::cx(0, 2)), Err(CircuitError::QubitOutOfRange { qubit: 2, width: 2 }));
        assert!(c.is_empty());
    }
}
