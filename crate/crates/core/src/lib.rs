// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

//! Routing-aware pruning of parametric two-qubit rotations.
//!
//! When a controlled rotation acts on qubits that are far apart on the
//! hardware graph, routing it costs SWAP gates, and every SWAP adds noise.
//! A rotation by a small angle barely changes the state. `qprune` compares
//! the two costs per gate while routing and drops the gate when bringing the
//! operands together would lose more fidelity than skipping the rotation.
//!
//! * [`circuit`]: gates, circuits and OpenQASM 2 input/output.
//! * [`topology`]: coupling graphs and SWAP distances.
//! * [`fidelity`]: the two fidelity estimates and the pruning rule.
//! * [`compiler`]: routing with the pruning hook and basis decomposition.
//! * [`simulator`]: ideal and noisy simulation.
//! * [`bench`]: benchmark circuits, experiments and reports.
//!
//! ```
//! use qprune::bench::gen_qft;
//! use qprune::compiler::{compile_pipeline, PipelineMode};
//! use qprune::fidelity::CostModelParams;
//! use qprune::topology::Topology;
//!
//! let qft = gen_qft(8, false).unwrap();
//! let grid = Topology::grid(2, 4).unwrap();
//! let params = CostModelParams::with_p2(0.02).unwrap();
//! let full = compile_pipeline(&qft, &grid, &params, PipelineMode::Noisy).unwrap();
//! let pruned = compile_pipeline(&qft, &grid, &params, PipelineMode::Pruned).unwrap();
//! assert!(!pruned.pruned_gates.is_empty());
//! assert!(pruned.compiled.len() < full.compiled.len());
//! ```

pub mod bench;
pub mod circuit;
pub mod compiler;
pub mod fidelity;
pub mod simulator;
pub mod topology;

// The guide in book/ is compiled as doctests so its snippets stay current.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/circuits.md")]
    mod circuits {}
    #[doc = include_str!("../../../book/src/topology.md")]
    mod topology {}
    #[doc = include_str!("../../../book/src/pruning.md")]
    mod pruning {}
    #[doc = include_str!("../../../book/src/compiling.md")]
    mod compiling {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
