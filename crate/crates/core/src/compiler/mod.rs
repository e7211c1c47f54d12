// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

//! Compilation: layout, SWAP routing with the pruning hook, the
//! angle-only baseline pruner and lowering to the hardware basis.

mod decompose;
mod layout;
mod route;

pub use decompose::decompose_to_basis;
pub use layout::Layout;
use route::route_keeping;
pub use route::{route, PrunedGate};

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateKind};
use crate::fidelity::{wrap_angle, CostModelParams, FidelityError};
use crate::topology::{Topology, TopologyError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CompileError {
    #[error("circuit needs {circuit} qubits but the topology has {physical}")]
    TooWide { circuit: usize, physical: usize },
    #[error("approximation degree {k} exceeds the {available} prunable gates in the circuit")]
    DegreeTooLarge { k: usize, available: usize },
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Fidelity(#[from] FidelityError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompilationResult {
    /// Circuit over physical qubits.
    pub compiled: Circuit,
    /// Where each virtual qubit ended up after routing.
    pub final_layout: Layout,
    /// Gates dropped by the router; empty when pruning is off.
    pub pruned_gates: Vec<PrunedGate>,
    pub swaps_inserted: usize,
}

/// Which of the compared pipelines to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PipelineMode {
    /// Route everything.
    Noisy,
    /// Route with the routing-aware pruning hook.
    Pruned,
    /// Drop the `k` smallest-angle parametric gates, then route everything.
    Baseline(usize),
}

/// Removes the `k` prunable gates with the smallest wrapped `|θ|`, earliest
/// first on ties, without looking at the hardware.
pub fn approximation_prune(circuit: &Circuit, k: usize) -> Result<Circuit, CompileError> {
    let mut candidates: Vec<(f64, usize)> = circuit
        .gates()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.kind().is_prunable())
        .map(|(i, g)| (wrap_angle(g.angle().expect("parametric")).abs(), i))
        .collect();
    if k > candidates.len() {
        return Err(CompileError::DegreeTooLarge { k, available: candidates.len() });
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut dropped = vec![false; circuit.len()];
    for &(_, i) in &candidates[..k] {
        dropped[i] = true;
    }
    let kept = circuit.gates().iter().zip(&dropped).filter(|(_, &d)| !d).map(|(g, _)| *g);
    Ok(Circuit::from_gates(circuit.name(), circuit.num_qubits(), kept).expect("subset of a valid circuit"))
}

/// Routes (with or without pruning) and lowers to the hardware basis. Every
/// mode starts from the identity layout.
///
/// Dropping a gate leaves the operands where they were, so later gates can
/// end up needing more SWAPs than before. In [`PipelineMode::Pruned`] the
/// result must therefore contain strictly fewer CX gates than the unpruned
/// compilation. While it does not, the pruning decision whose reversal
/// gives the fewest CX gates is reverted (earliest gate on ties). Without
/// any pruned gates left the result equals the unpruned compilation.
pub fn compile_pipeline(
    circuit: &Circuit,
    topology: &Topology,
    params: &CostModelParams,
    mode: PipelineMode,
) -> Result<CompilationResult, CompileError> {
    let lower = |mut r: CompilationResult| {
        r.compiled = decompose_to_basis(&r.compiled);
        r
    };
    match mode {
        PipelineMode::Noisy => Ok(lower(route(circuit, topology, params, false)?)),
        PipelineMode::Baseline(k) => Ok(lower(route(&approximation_prune(circuit, k)?, topology, params, false)?)),
        PipelineMode::Pruned => {
            let limit = cx_count(&lower(route(circuit, topology, params, false)?));
            let mut keep = vec![false; circuit.len()];
            loop {
                let result = lower(route_keeping(circuit, topology, params, true, &keep)?);
                if result.pruned_gates.is_empty() || cx_count(&result) < limit {
                    return Ok(result);
                }
                let mut best: Option<(usize, usize)> = None;
                for g in &result.pruned_gates {
                    keep[g.index] = true;
                    let cx = cx_count(&lower(route_keeping(circuit, topology, params, true, &keep)?));
                    keep[g.index] = false;
                    if best.map_or(true, |(c, _)| cx < c) {
                        best = Some((cx, g.index));
                    }
                }
                keep[best.expect("at least one pruned gate").1] = true;
            }
        }
    }
}

fn cx_count(result: &CompilationResult) -> usize {
    result.compiled.count_gates(Some(GateKind::Cx))
}
