// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::{CompilationResult, CompileError, Layout};
use crate::circuit::{Circuit, Gate};
use crate::fidelity::{should_prune, CostModelParams};
use crate::topology::Topology;

/// A gate dropped by the router.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrunedGate {
    /// Position of the gate in the source circuit.
    pub index: usize,
    pub angle: f64,
    /// Swap distance between the operands when the decision was taken.
    pub swap_distance: usize,
}

/// Maps `circuit` onto `topology`, inserting SWAPs in front of every
/// two-qubit gate whose operands are not adjacent.
///
/// Gates are visited in program order starting from the identity layout. For
/// a non-adjacent pair the operands walk towards each other along
/// [`Topology::shortest_path`]: the first operand takes `ceil(d/2)` steps and
/// the second `floor(d/2)`. With `prune` set, a parametric two-qubit gate for
/// which [`should_prune`] holds at the current distance is dropped instead
/// and no SWAPs are inserted for it.
///
/// The returned circuit is over physical qubits and still contains the
/// source gate kinds plus `SWAP`; see [`super::compile_pipeline`] for the
/// lowered form.
pub fn route(
    circuit: &Circuit,
    topology: &Topology,
    params: &CostModelParams,
    prune: bool,
) -> Result<CompilationResult, CompileError> {
    route_keeping(circuit, topology, params, prune, &[])
}

/// [`route`] where gates whose index is set in `keep` are never pruned.
pub(crate) fn route_keeping(
    circuit: &Circuit,
    topology: &Topology,
    params: &CostModelParams,
    prune: bool,
    keep: &[bool],
) -> Result<CompilationResult, CompileError> {
    let n_phys = topology.num_physical();
    if circuit.num_qubits() > n_phys {
        return Err(CompileError::TooWide { circuit: circuit.num_qubits(), physical: n_phys });
    }
    let mut layout = Layout::identity(n_phys);
    let mut out = Circuit::new(circuit.name(), n_phys);
    let mut pruned = Vec::new();
    let mut swaps = 0;

    for (index, gate) in circuit.gates().iter().enumerate() {
        if gate.qubits().len() == 1 {
            push(&mut out, gate.remap(|q| layout.physical(q)));
            continue;
        }
        let (a, b) = (gate.qubits()[0], gate.qubits()[1]);
        let (pa, pb) = (layout.physical(a), layout.physical(b));
        let d = topology.swap_distance(pa, pb)?;
        if d > 0 {
            if prune && gate.kind().is_prunable() && !keep.get(index).copied().unwrap_or(false) {
                let theta = gate.angle().expect("parametric gate carries an angle");
                if should_prune(params, theta, d)? {
                    pruned.push(PrunedGate { index, angle: theta, swap_distance: d });
                    continue;
                }
            }
            let path = topology.shortest_path(pa, pb);
            let last = path.len() - 1;
            for i in 0..d.div_ceil(2) {
                push(&mut out, Gate::swap(path[i], path[i + 1]));
                layout.swap_physical(path[i], path[i + 1]);
            }
            for i in 0..d / 2 {
                push(&mut out, Gate::swap(path[last - i], path[last - i - 1]));
                layout.swap_physical(path[last - i], path[last - i - 1]);
            }
            swaps += d;
        }
        let routed = gate.remap(|q| layout.physical(q));
        debug_assert!(topology.are_adjacent(routed.qubits()[0], routed.qubits()[1]));
        push(&mut out, routed);
    }

    Ok(CompilationResult { compiled: out, final_layout: layout, pruned_gates: pruned, swaps_inserted: swaps })
}

fn push(out: &mut Circuit, gate: Gate) {
    out.push(gate).expect("physical index within topology");
}
