// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_PI_2;

use crate::circuit::{Circuit, Gate, GateKind};

/// Lowers every gate to the `{CX, ID, RZ, SX, X}` basis. The result equals
/// the input up to a global phase.
pub fn decompose_to_basis(circuit: &Circuit) -> Circuit {
    let mut out = Circuit::new(circuit.name(), circuit.num_qubits());
    let mut buf = Vec::new();
    for gate in circuit.gates() {
        buf.clear();
        lower(gate, &mut buf);
        for g in buf.drain(..) {
            out.push(g).expect("lowering keeps operands");
        }
    }
    out
}

fn lower_h(q: usize, out: &mut Vec<Gate>) {
    out.extend([Gate::rz(FRAC_PI_2, q), Gate::sx(q), Gate::rz(FRAC_PI_2, q)]);
}

fn lower_crz(theta: f64, c: usize, t: usize, out: &mut Vec<Gate>) {
    out.extend([Gate::rz(theta / 2.0, t), Gate::cx(c, t), Gate::rz(-theta / 2.0, t), Gate::cx(c, t)]);
}

fn lower(gate: &Gate, out: &mut Vec<Gate>) {
    let qs = gate.qubits();
    let theta = gate.angle().unwrap_or(0.0);
    match gate.kind() {
        GateKind::X | GateKind::Sx | GateKind::Rz | GateKind::Id | GateKind::Cx => out.push(*gate),
        GateKind::H => lower_h(qs[0], out),
        GateKind::Swap => {
            let (a, b) = (qs[0], qs[1]);
            out.extend([Gate::cx(a, b), Gate::cx(b, a), Gate::cx(a, b)]);
        }
        GateKind::Crz => lower_crz(theta, qs[0], qs[1], out),
        GateKind::Cp => {
            lower_crz(theta, qs[0], qs[1], out);
            out.push(Gate::rz(theta / 2.0, qs[0]));
        }
        GateKind::Rzz => {
            let (a, b) = (qs[0], qs[1]);
            out.extend([Gate::cx(a, b), Gate::rz(theta, b), Gate::cx(a, b)]);
        }
        GateKind::Crx => {
            // H·Z·H = X
            let t = qs[1];
            lower_h(t, out);
            lower_crz(theta, qs[0], t, out);
            lower_h(t, out);
        }
        GateKind::Cry => {
            // (S·H)·Z·(S·H)† = Y
            let t = qs[1];
            out.push(Gate::rz(-FRAC_PI_2, t));
            lower_h(t, out);
            lower_crz(theta, qs[0], t, out);
            lower_h(t, out);
            out.push(Gate::rz(FRAC_PI_2, t));
        }
    }
}
