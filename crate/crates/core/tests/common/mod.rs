// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::f64::consts::PI;

use qprune::circuit::{Circuit, Gate, GateKind};
use qprune::compiler::decompose_to_basis;
use qprune::fidelity::relaxation_times;
use qprune::simulator::{circuit_duration, NoiseModel};
use rand::Rng;

/// Random circuit over every supported gate kind.
pub fn random_circuit(rng: &mut impl Rng, n: usize, len: usize) -> Circuit {
    let kinds: Vec<GateKind> = GateKind::ALL.iter().copied().filter(|k| k.arity() <= n).collect();
    let mut c = Circuit::new("random", n);
    for _ in 0..len {
        let kind = kinds[rng.gen_range(0..kinds.len())];
        let a = rng.gen_range(0..n);
        let qubits = if kind.arity() == 2 {
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            vec![a, b]
        } else {
            vec![a]
        };
        let angle = kind.is_parametric().then(|| rng.gen_range(-PI..PI));
        c.push(Gate::new(kind, &qubits, angle).unwrap()).unwrap();
    }
    c
}

/// Random basis-level circuit with noise whose relaxation times follow the
/// circuit duration.
pub fn random_noisy_case(rng: &mut impl Rng, n: usize, len: usize, p2: f64) -> (Circuit, NoiseModel) {
    let c = decompose_to_basis(&random_circuit(rng, n, len));
    let base = NoiseModel::depolarizing(p2).unwrap();
    let (t1, t2) = relaxation_times(circuit_duration(&c, &base)).unwrap();
    (c, NoiseModel::new(p2, t1, t2).unwrap())
}
