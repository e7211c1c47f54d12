// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

mod common;

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qprune::bench::Family;
use qprune::circuit::{emit_qasm, gate_unitary, parse_qasm, Circuit, Gate, GateKind};
use qprune::compiler::{compile_pipeline, decompose_to_basis, route, PipelineMode};
use qprune::fidelity::{should_prune, CostModelParams};
use qprune::simulator::simulate_ideal;
use qprune::topology::Topology;

fn generator_circuits(max_width: usize) -> Vec<Circuit> {
    let mut out = Vec::new();
    for family in Family::ALL {
        for n in family.min_width()..=max_width {
            out.push(family.generate(n, 2, n as u64).unwrap());
        }
    }
    out
}

#[test]
fn qasm_round_trip_on_generator_circuits() {
    for c in generator_circuits(12) {
        let back = parse_qasm(&emit_qasm(&c)).unwrap();
        assert_eq!(back.num_qubits(), c.num_qubits());
        assert_eq!(back.len(), c.len(), "{}", c.name());
        for (a, b) in c.gates().iter().zip(back.gates()) {
            assert_eq!(a.kind(), b.kind());
            assert_eq!(a.qubits(), b.qubits());
            match (a.angle(), b.angle()) {
                (Some(x), Some(y)) => assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300), "{x} vs {y}"),
                (None, None) => {}
                _ => panic!("angle presence changed"),
            }
        }
    }
}

#[test]
fn gate_unitaries_are_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let parametric: Vec<GateKind> = GateKind::ALL.iter().copied().filter(|k| k.is_parametric()).collect();
    for i in 0..1000 {
        let kind = parametric[i % parametric.len()];
        let qubits: &[usize] = if kind.arity() == 2 { &[0, 1] } else { &[0] };
        let g = Gate::new(kind, qubits, Some(rand::Rng::gen_range(&mut rng, -4.0 * PI..4.0 * PI))).unwrap();
        let u = gate_unitary(&g);
        let prod = u.t().mapv(|z| z.conj()).dot(&u);
        let err = (&prod - &Array2::<Complex64>::eye(u.nrows())).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err <= 1e-12, "{kind:?}: {err}");
    }
}

#[test]
fn decomposition_preserves_generator_states() {
    for c in generator_circuits(10) {
        let a = simulate_ideal(&c).unwrap();
        let b = simulate_ideal(&decompose_to_basis(&c)).unwrap();
        let f = a.inner(&b).norm_sqr();
        assert!((f - 1.0).abs() <= 1e-9, "{}: {f}", c.name());
    }
}

#[test]
fn grid_distances_are_manhattan() {
    for r in 1..=4 {
        for c in 1..=4 {
            if r * c < 2 {
                continue;
            }
            let t = Topology::grid(r, c).unwrap();
            assert_eq!(t.num_physical(), r * c);
            for p in 0..r * c {
                let deg = t.neighbors(p).len();
                assert!(deg <= 4 && deg >= 1.min(r * c - 1));
                if r >= 2 && c >= 2 {
                    assert!(deg >= 2);
                }
                for q in 0..r * c {
                    let manhattan = (p / c).abs_diff(q / c) + (p % c).abs_diff(q % c);
                    assert_eq!(t.distance(p, q), manhattan);
                    if p != q {
                        assert_eq!(t.swap_distance(p, q).unwrap(), t.swap_distance(q, p).unwrap());
                        assert_eq!(t.swap_distance(p, q).unwrap(), manhattan - 1);
                    }
                    for k in 0..r * c {
                        assert!(t.distance(p, q) <= t.distance(p, k) + t.distance(k, q));
                    }
                }
            }
        }
    }
}

#[test]
fn prune_off_matches_baseline_zero() {
    let params = CostModelParams::with_p2(0.01).unwrap();
    for c in generator_circuits(8) {
        let topo = Topology::grid_for_width(c.num_qubits()).unwrap();
        let noisy = compile_pipeline(&c, &topo, &params, PipelineMode::Noisy).unwrap();
        let base = compile_pipeline(&c, &topo, &params, PipelineMode::Baseline(0)).unwrap();
        assert_eq!(emit_qasm(&noisy.compiled), emit_qasm(&base.compiled));
        assert!(noisy.pruned_gates.is_empty());
    }
}

fn arb_circuit() -> impl Strategy<Value = (Circuit, u64)> {
    (2usize..=6, 1usize..40, any::<u64>()).prop_map(|(n, len, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (common::random_circuit(&mut rng, n, len), seed)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn compiled_gates_sit_on_edges((c, seed) in arb_circuit(), p2 in 0.0..0.2f64, prune: bool) {
        let topo = Topology::grid_for_width(c.num_qubits()).unwrap();
        let params = CostModelParams::with_p2(p2).unwrap();
        let r = route(&c, &topo, &params, prune).unwrap();
        prop_assert!(r.final_layout.is_consistent());
        if !prune {
            prop_assert!(r.pruned_gates.is_empty());
        }
        for g in r.compiled.gates() {
            if g.kind().arity() == 2 {
                prop_assert!(topo.are_adjacent(g.qubits()[0], g.qubits()[1]), "seed {}", seed);
            }
        }
        let lowered = compile_pipeline(&c, &topo, &params, if prune { PipelineMode::Pruned } else { PipelineMode::Noisy }).unwrap();
        prop_assert!(lowered.compiled.is_basis_only());
    }

    #[test]
    fn pruned_pipeline_never_adds_cx((c, _seed) in arb_circuit(), p2 in 0.0..0.2f64) {
        let topo = Topology::grid_for_width(c.num_qubits()).unwrap();
        let params = CostModelParams::with_p2(p2).unwrap();
        let noisy = compile_pipeline(&c, &topo, &params, PipelineMode::Noisy).unwrap();
        let pruned = compile_pipeline(&c, &topo, &params, PipelineMode::Pruned).unwrap();
        let cx = |r: &qprune::compiler::CompilationResult| r.compiled.count_gates(Some(GateKind::Cx));
        if pruned.pruned_gates.is_empty() {
            prop_assert_eq!(cx(&pruned), cx(&noisy));
        } else {
            prop_assert!(cx(&pruned) < cx(&noisy));
        }
    }

    #[test]
    fn pruning_decision_monotone_in_p2(theta in -PI..PI, d in 0usize..20, a in 0.0..0.99f64, b in 0.0..0.99f64) {
        let (lo, hi) = (a.min(b), a.max(b));
        let at = |p2| should_prune(&CostModelParams::with_p2(p2).unwrap(), theta, d).unwrap();
        prop_assert!(!at(lo) || at(hi));
    }

    #[test]
    fn angles_survive_qasm(theta in -1e6..1e6f64) {
        let mut c = Circuit::new("t", 2);
        c.extend([Gate::crz(theta, 0, 1), Gate::rz(theta, 1), Gate::rzz(theta, 1, 0)]).unwrap();
        let back = parse_qasm(&emit_qasm(&c)).unwrap();
        for g in back.gates() {
            let got = g.angle().unwrap();
            prop_assert!((got - theta).abs() <= 1e-12 * theta.abs().max(1e-300));
        }
    }
}
