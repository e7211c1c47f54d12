// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form cost model behind the pruning decision.
//!
//! Two numbers are compared every time the router meets a parametric
//! two-qubit gate whose operands are not adjacent:
//!
//! * the worst-case fidelity between a state and its rotated image,
//!   `cos²(θ/2)`, which is what dropping the gate can cost at most, and
//! * the fidelity left after routing the operands together with SWAPs
//!   under uniform depolarizing noise.
//!
//! The gate is dropped when routing is the more expensive of the two.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

pub const DEFAULT_ROUTING_OVERHEAD: f64 = 1.25;

/// Upper bound applied by [`p2_heuristic`] so tiny circuits keep a physical channel.
pub const P2_HEURISTIC_CAP: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FidelityError {
    #[error("angle must be finite, got {0}")]
    NonFiniteAngle(f64),
    #[error("p2 must lie in [0, 1), got {0}")]
    BadP2(f64),
    #[error("routing overhead must be a finite value >= 1, got {0}")]
    BadOverhead(f64),
    #[error("gate and qubit counts must both be positive (gates = {gates}, qubits = {qubits})")]
    ZeroCount { gates: usize, qubits: usize },
    #[error("circuit duration must be positive and finite, got {0} s")]
    BadDuration(f64),
}

/// Parameters of the SWAP-routing cost estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModelParams {
    p2: f64,
    routing_overhead: f64,
}

impl CostModelParams {
    pub fn new(p2: f64, routing_overhead: f64) -> Result<CostModelParams, FidelityError> {
        if !(0.0..1.0).contains(&p2) {
            return Err(FidelityError::BadP2(p2));
        }
        if !(routing_overhead.is_finite() && routing_overhead >= 1.0) {
            return Err(FidelityError::BadOverhead(routing_overhead));
        }
        Ok(CostModelParams { p2, routing_overhead })
    }

    /// `p2` with the default 1.25 routing overhead.
    pub fn with_p2(p2: f64) -> Result<CostModelParams, FidelityError> {
        CostModelParams::new(p2, DEFAULT_ROUTING_OVERHEAD)
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn routing_overhead(&self) -> f64 {
        self.routing_overhead
    }

    /// SWAPs each operand is expected to take for a gate at swap distance `d`:
    /// `ceil(ceil(overhead·d) / 2)`.
    pub fn swaps_per_qubit(&self, d: usize) -> u64 {
        let effective = (self.routing_overhead * d as f64).ceil() as u64;
        effective.div_ceil(2)
    }
}

/// Wraps an angle into `(-π, π]`. Angles already in range are returned
/// unchanged.
pub fn wrap_angle(theta: f64) -> f64 {
    if theta > -PI && theta <= PI {
        return theta;
    }
    let mut t = theta.rem_euclid(TAU);
    if t > PI {
        t -= TAU;
    }
    t
}

/// Worst-case fidelity between `|ψ⟩` and its image under a rotation by
/// `theta` about any axis: `cos²(θ/2)` with `θ` wrapped into `(-π, π]`.
///
/// ```
/// use qprune::fidelity::rotation_fidelity_bound;
/// assert_eq!(rotation_fidelity_bound(0.0).unwrap(), 1.0);
/// assert!(rotation_fidelity_bound(std::f64::consts::PI).unwrap() < 1e-30);
/// ```
pub fn rotation_fidelity_bound(theta: f64) -> Result<f64, FidelityError> {
    if !theta.is_finite() {
        return Err(FidelityError::NonFiniteAngle(theta));
    }
    let c = (wrap_angle(theta) / 2.0).cos();
    Ok((c * c).clamp(0.0, 1.0))
}

/// Fidelity of a two-qubit state after both operands are routed together
/// across swap distance `d`.
///
/// Each operand takes `s` SWAPs (3 CX each), every CX depolarizing with
/// probability `p2`. With `g = (1−p2)^(3s)` the surviving weight per qubit is
/// `g + (1−g)/4`, squared for the pair. Returns exactly 1 when `d = 0`; the
/// value never drops below 1/16.
pub fn swap_fidelity(params: &CostModelParams, d: usize) -> f64 {
    if d == 0 {
        return 1.0;
    }
    let cx_per_qubit = 3 * params.swaps_per_qubit(d);
    let g = (1.0 - params.p2).powf(cx_per_qubit as f64);
    let per_qubit = g + (1.0 - g) / 4.0;
    per_qubit * per_qubit
}

/// Whether a gate rotating by `theta` at swap distance `d` should be dropped:
/// true iff routing costs strictly more fidelity than omitting the rotation.
pub fn should_prune(params: &CostModelParams, theta: f64, d: usize) -> Result<bool, FidelityError> {
    Ok(swap_fidelity(params, d) < rotation_fidelity_bound(theta)?)
}

/// Depolarizing parameter from circuit size: `(gates/qubits)^-2`, capped at
/// [`P2_HEURISTIC_CAP`].
pub fn p2_heuristic(gate_count: usize, qubit_count: usize) -> Result<f64, FidelityError> {
    if gate_count == 0 || qubit_count == 0 {
        return Err(FidelityError::ZeroCount { gates: gate_count, qubits: qubit_count });
    }
    let ratio = gate_count as f64 / qubit_count as f64;
    Ok((1.0 / (ratio * ratio)).min(P2_HEURISTIC_CAP))
}

/// `T1 = T2 = 2·duration`.
pub fn relaxation_times(circuit_duration: f64) -> Result<(f64, f64), FidelityError> {
    if !(circuit_duration.is_finite() && circuit_duration > 0.0) {
        return Err(FidelityError::BadDuration(circuit_duration));
    }
    Ok((2.0 * circuit_duration, 2.0 * circuit_duration))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig1() -> CostModelParams {
        CostModelParams::with_p2(0.005).unwrap()
    }

    #[test]
    fn rotation_bound_values() {
        assert_eq!(rotation_fidelity_bound(0.0).unwrap(), 1.0);
        assert!(rotation_fidelity_bound(PI).unwrap().abs() < 1e-30);
        // cos²(π/12), 40-digit reference
        assert!((rotation_fidelity_bound(PI / 6.0).unwrap() - 0.933_012_701_892_219_3).abs() < 1e-15);
        assert!(matches!(rotation_fidelity_bound(f64::INFINITY), Err(FidelityError::NonFiniteAngle(_))));
    }

    #[test]
    fn wrapping() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        let a = rotation_fidelity_bound(0.3 + 4.0 * PI).unwrap();
        assert!((a - rotation_fidelity_bound(0.3).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn swap_fidelity_closed_form() {
        // mpmath references, 40 digits
        let p = fig1();
        assert_eq!(swap_fidelity(&p, 0), 1.0);
        assert!((swap_fidelity(&p, 1) - 0.977_737_614_637_899_4).abs() < 1e-14);
        assert!((swap_fidelity(&p, 3) - 0.956_052_519_897_936_0).abs() < 1e-14);
        assert!((swap_fidelity(&p, 4) - 0.934_928_840_266_168_6).abs() < 1e-14);
        assert!((swap_fidelity(&p, 5) - 0.914_351_152_249_876_6).abs() < 1e-14);
        let worst = CostModelParams::with_p2(0.999_999).unwrap();
        assert!(swap_fidelity(&worst, 40) >= 1.0 / 16.0);
    }

    #[test]
    fn prune_threshold() {
        let p = fig1();
        let theta = PI / 6.0;
        for d in [0, 1, 3, 4] {
            assert!(!should_prune(&p, theta, d).unwrap(), "d = {d}");
        }
        assert!(should_prune(&p, theta, 5).unwrap());
        assert!(!should_prune(&p, PI, 30).unwrap());
        assert!(!should_prune(&CostModelParams::with_p2(0.0).unwrap(), 1e-9, 10).unwrap());
        assert!(should_prune(&CostModelParams::with_p2(0.0).unwrap(), 0.0, 10).is_ok());
    }

    #[test]
    fn heuristics() {
        assert!((p2_heuristic(100, 10).unwrap() - 0.01).abs() < 1e-18);
        assert!((p2_heuristic(200, 10).unwrap() - 0.0025).abs() < 1e-18);
        assert_eq!(p2_heuristic(5, 10).unwrap(), 0.5);
        assert!(p2_heuristic(0, 3).is_err());
        assert_eq!(relaxation_times(10e-6).unwrap(), (20e-6, 20e-6));
        assert_eq!(relaxation_times(1.0).unwrap(), (2.0, 2.0));
        assert!(relaxation_times(0.0).is_err());
    }

    #[test]
    fn param_validation() {
        assert!(CostModelParams::new(1.0, 1.25).is_err());
        assert!(CostModelParams::new(-0.1, 1.25).is_err());
        assert!(CostModelParams::new(0.1, 0.9).is_err());
        assert_eq!(fig1().swaps_per_qubit(1), 1);
        assert_eq!(fig1().swaps_per_qubit(5), 4);
    }

    #[test]
    fn swap_fidelity_monotone_grid() {
        let ps: Vec<f64> = (0..50).map(|i| i as f64 / 50.0 * 0.9).collect();
        for (i, &p) in ps.iter().enumerate() {
            let params = CostModelParams::with_p2(p).unwrap();
            for d in 0..50 {
                let f = swap_fidelity(&params, d);
                assert!(f <= 1.0 && f >= 1.0 / 16.0);
                assert!(swap_fidelity(&params, d + 1) <= f);
                if p > 0.0 && d > 0 && f - 1.0 / 16.0 > 1e-12 {
                    assert!(swap_fidelity(&params, d + 1) < f || params.swaps_per_qubit(d + 1) == params.swaps_per_qubit(d));
                }
                if i + 1 < ps.len() {
                    let next = CostModelParams::with_p2(ps[i + 1]).unwrap();
                    assert!(swap_fidelity(&next, d) <= f);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn prune_is_monotone_in_distance(theta in -10.0f64..10.0, p2 in 0.0f64..0.5, d in 0usize..30) {
            let params = CostModelParams::with_p2(p2).unwrap();
            if should_prune(&params, theta, d).unwrap() {
                for later in d..d + 20 {
                    prop_assert!(should_prune(&params, theta, later).unwrap());
                }
            }
        }

        #[test]
        fn prune_is_monotone_in_p2(theta in -4.0f64..4.0, p2 in 0.0f64..0.49, bump in 0.0f64..0.5, d in 0usize..12) {
            let low = CostModelParams::with_p2(p2).unwrap();
            let high = CostModelParams::with_p2((p2 + bump).min(0.99)).unwrap();
            if should_prune(&low, theta, d).unwrap() {
                prop_assert!(should_prune(&high, theta, d).unwrap());
            }
        }

        #[test]
        fn rotation_bound_is_even(theta in -20.0f64..20.0) {
            let a = rotation_fidelity_bound(theta).unwrap();
            let b = rotation_fidelity_bound(-theta).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&a));
        }
    }
}
