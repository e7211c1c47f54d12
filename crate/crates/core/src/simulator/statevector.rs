// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use super::kernels::{apply_1q, apply_2q, to_m2, to_m4};
use super::SimError;
use crate::circuit::{Circuit, Gate};
use crate::compiler::Layout;

/// Widest register the dense simulators accept.
pub const MAX_STATEVECTOR_QUBITS: usize = 20;

/// Pure state on `n` qubits; bit `q` of an amplitude index is qubit `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(num_qubits: usize) -> StateVector {
        StateVector::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> StateVector {
        let mut amps = vec![C::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = C::new(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<C>) -> Option<StateVector> {
        if !amps.len().is_power_of_two() {
            return None;
        }
        Some(StateVector { num_qubits: amps.len().trailing_zeros() as usize, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        let u = gate.unitary();
        match gate.qubits() {
            &[q] => apply_1q(&mut self.amps, q, &to_m2(&u)),
            &[q0, q1] => apply_2q(&mut self.amps, q0, q1, &to_m4(&u)),
            _ => unreachable!("gates act on one or two qubits"),
        }
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<(), SimError> {
        if circuit.num_qubits() != self.num_qubits {
            return Err(SimError::WidthMismatch { expected: self.num_qubits, got: circuit.num_qubits() });
        }
        for g in circuit.gates() {
            self.apply_gate(g);
        }
        Ok(())
    }

    /// Places this state on the physical register described by `layout`:
    /// virtual qubit `l` moves to physical qubit `layout.physical(l)` and
    /// physical qubits hosting idle ancillas are `|0⟩`.
    pub fn embed(&self, layout: &Layout) -> Result<StateVector, SimError> {
        let width = layout.len();
        if self.num_qubits > width {
            return Err(SimError::WidthMismatch { expected: width, got: self.num_qubits });
        }
        let targets: Vec<usize> = (0..self.num_qubits).map(|l| 1 << layout.physical(l)).collect();
        let mut amps = vec![C::new(0.0, 0.0); 1 << width];
        for (x, &a) in self.amps.iter().enumerate() {
            let mut idx = 0;
            for (l, &t) in targets.iter().enumerate() {
                if x >> l & 1 == 1 {
                    idx |= t;
                }
            }
            amps[idx] = a;
        }
        Ok(StateVector { num_qubits: width, amps })
    }
}

/// Noiseless simulation of `circuit` from `|0…0⟩`.
pub fn simulate_ideal(circuit: &Circuit) -> Result<StateVector, SimError> {
    if circuit.num_qubits() > MAX_STATEVECTOR_QUBITS {
        return Err(SimError::TooWide { qubits: circuit.num_qubits(), limit: MAX_STATEVECTOR_QUBITS });
    }
    let mut state = StateVector::zero(circuit.num_qubits());
    state.apply_circuit(circuit)?;
    Ok(state)
}
