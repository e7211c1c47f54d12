// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::kernels::{self, kron2, mul2, mul4, to_m2, M2, M4, CX, I2};
use super::SimError;
use crate::circuit::{Circuit, GateKind};

pub const DEFAULT_DUR_1Q: f64 = 35e-9;
pub const DEFAULT_DUR_2Q: f64 = 300e-9;

/// Noise attached to every CX: a two-qubit depolarizing channel followed by
/// thermal relaxation of both operands over `dur_2q`. Single-qubit gates are
/// noiseless and contribute only their duration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p2: f64,
    #[serde(rename = "t1_s")]
    pub t1: f64,
    #[serde(rename = "t2_s")]
    pub t2: f64,
    #[serde(rename = "dur_1q_s", default = "default_dur_1q")]
    pub dur_1q: f64,
    #[serde(rename = "dur_2q_s", default = "default_dur_2q")]
    pub dur_2q: f64,
}

fn default_dur_1q() -> f64 {
    DEFAULT_DUR_1Q
}

fn default_dur_2q() -> f64 {
    DEFAULT_DUR_2Q
}

impl NoiseModel {
    /// Checks `0 ≤ p2 ≤ 1`, `t1 > 0` and `0 < t2 ≤ 2·t1`. Infinite relaxation
    /// times switch relaxation off.
    pub fn new(p2: f64, t1: f64, t2: f64) -> Result<NoiseModel, SimError> {
        NoiseModel { p2, t1, t2, dur_1q: DEFAULT_DUR_1Q, dur_2q: DEFAULT_DUR_2Q }.validated()
    }

    /// Only depolarizing noise.
    pub fn depolarizing(p2: f64) -> Result<NoiseModel, SimError> {
        NoiseModel::new(p2, f64::INFINITY, f64::INFINITY)
    }

    pub fn with_durations(mut self, dur_1q: f64, dur_2q: f64) -> Result<NoiseModel, SimError> {
        self.dur_1q = dur_1q;
        self.dur_2q = dur_2q;
        self.validated()
    }

    pub fn validated(self) -> Result<NoiseModel, SimError> {
        let ok = (0.0..=1.0).contains(&self.p2)
            && self.t1 > 0.0
            && self.t2 > 0.0
            && (self.t1.is_infinite() || self.t2 <= 2.0 * self.t1)
            && self.dur_1q >= 0.0
            && self.dur_2q >= 0.0
            && self.dur_1q.is_finite()
            && self.dur_2q.is_finite();
        if ok {
            Ok(self)
        } else {
            Err(SimError::BadNoise(self))
        }
    }

    /// Amplitude-damping probability over one CX.
    pub(crate) fn gamma(&self) -> f64 {
        -(-self.dur_2q / self.t1).exp_m1()
    }

    /// Off-diagonal decay factor over one CX, `e^{-t/T2}`.
    pub(crate) fn coherence_decay(&self) -> f64 {
        (-self.dur_2q / self.t2).exp()
    }

    /// Phase-flip probability that, composed with amplitude damping, yields
    /// the `e^{-t/T2}` off-diagonal decay.
    pub(crate) fn phase_flip(&self) -> f64 {
        let extra = (-self.dur_2q / self.t2 + self.dur_2q / (2.0 * self.t1)).exp();
        ((1.0 - extra) / 2.0).max(0.0)
    }
}

/// Serial execution time of a basis circuit: `dur_1q` per single-qubit gate
/// plus `dur_2q` per CX.
pub fn circuit_duration(circuit: &Circuit, noise: &NoiseModel) -> f64 {
    circuit
        .gates()
        .iter()
        .map(|g| if g.qubits().len() == 2 { noise.dur_2q } else { noise.dur_1q })
        .sum()
}

/// One CX together with the single-qubit gates absorbed in front of it.
#[derive(Debug, Clone)]
pub(crate) struct Step {
    pub control: usize,
    pub target: usize,
    /// `CX · (pre_control ⊗ pre_target)`, local index `2·bit_control + bit_target`.
    pub unitary: M4,
}

/// A basis circuit regrouped around its CX gates, which are the only places
/// where noise acts.
#[derive(Debug, Clone)]
pub(crate) struct Program {
    pub steps: Vec<Step>,
    /// Single-qubit gates left after the last CX on each qubit.
    pub tail: Vec<(usize, M2)>,
}

impl Program {
    pub fn compile(circuit: &Circuit) -> Result<Program, SimError> {
        let n = circuit.num_qubits();
        let mut pending: Vec<M2> = vec![I2; n];
        let mut steps = Vec::new();
        for g in circuit.gates() {
            match g.kind() {
                GateKind::Cx => {
                    let (c, t) = (g.qubits()[0], g.qubits()[1]);
                    let pre = kron2(&pending[c], &pending[t]);
                    steps.push(Step { control: c, target: t, unitary: mul4(&CX, &pre) });
                    pending[c] = I2;
                    pending[t] = I2;
                }
                k if k.is_basis() => {
                    let q = g.qubits()[0];
                    pending[q] = mul2(&to_m2(&g.unitary()), &pending[q]);
                }
                k => return Err(SimError::NonBasisGate(k)),
            }
        }
        let tail = pending.into_iter().enumerate().filter(|(_, m)| !kernels::is_identity2(m)).collect();
        Ok(Program { steps, tail })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    #[test]
    fn durations() {
        let noise = NoiseModel::depolarizing(0.0).unwrap();
        let ten_cx = Circuit::from_gates("c", 2, (0..10).map(|_| Gate::cx(0, 1))).unwrap();
        assert!((circuit_duration(&ten_cx, &noise) - 3.0e-6).abs() < 1e-18);
        assert_eq!(circuit_duration(&Circuit::new("e", 2), &noise), 0.0);
        let mixed = Circuit::from_gates(
            "m",
            2,
            [Gate::rz(0.1, 0), Gate::rz(0.1, 1), Gate::cx(0, 1), Gate::rz(0.2, 0), Gate::rz(0.2, 1), Gate::cx(1, 0)],
        )
        .unwrap();
        assert!((circuit_duration(&mixed, &noise) - 740e-9).abs() < 1e-18);
    }

    #[test]
    fn validation() {
        assert!(NoiseModel::new(1.5, 1.0, 1.0).is_err());
        assert!(NoiseModel::new(0.1, 1.0, 2.5).is_err());
        assert!(NoiseModel::new(0.1, 0.0, 0.0).is_err());
        assert!(NoiseModel::new(0.1, 1.0, 2.0).is_ok());
    }

    #[test]
    fn relaxation_rates_compose() {
        let n = NoiseModel::new(0.0, 1e-6, 1e-6).unwrap();
        let amp = (1.0 - n.gamma()).sqrt();
        let total = amp * (1.0 - 2.0 * n.phase_flip());
        assert!((total - n.coherence_decay()).abs() < 1e-15);
        let off = NoiseModel::depolarizing(0.0).unwrap();
        assert_eq!((off.gamma(), off.phase_flip()), (0.0, 0.0));
    }

    #[test]
    fn program_rejects_non_basis() {
        let c = Circuit::from_gates("h", 1, [Gate::h(0)]).unwrap();
        assert!(matches!(Program::compile(&c), Err(SimError::NonBasisGate(GateKind::H))));
    }

    #[test]
    fn noise_json_keys() {
        let n: NoiseModel = serde_json::from_str(r#"{"p2": 0.01, "t1_s": 1e-4, "t2_s": 1e-4}"#).unwrap();
        assert_eq!(n.dur_2q, DEFAULT_DUR_2Q);
        let back: NoiseModel = serde_json::from_str(&serde_json::to_string(&n).unwrap()).unwrap();
        assert_eq!(back, n);
    }
}
