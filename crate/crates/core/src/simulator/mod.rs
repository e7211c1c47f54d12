// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

//! Ideal and noisy simulation.
//!
//! Three engines share the same gate kernels: an exact statevector for the
//! ideal state, a density matrix for exact noisy evolution up to
//! [`MAX_DENSITY_QUBITS`] qubits, and a trajectory sampler that estimates
//! the noisy fidelity on wider registers.

mod density;
pub(crate) mod kernels;
mod noise;
mod statevector;
mod trajectory;

use thiserror::Error;

use crate::circuit::{Circuit, GateKind};
use crate::compiler::Layout;

pub use density::{simulate_noisy_dm, DensityMatrix, MAX_DENSITY_QUBITS};
pub use noise::{circuit_duration, NoiseModel, DEFAULT_DUR_1Q, DEFAULT_DUR_2Q};
pub use statevector::{simulate_ideal, StateVector, MAX_STATEVECTOR_QUBITS};
pub use trajectory::{simulate_noisy_traj, trajectory_fidelities, FidelityEstimate};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("width mismatch: expected {expected} qubits, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("{qubits} qubits exceeds the simulator limit of {limit}")]
    TooWide { qubits: usize, limit: usize },
    #[error("gate {0:?} is not in the CX/ID/RZ/SX/X basis")]
    NonBasisGate(GateKind),
    #[error("invalid noise model {0:?}")]
    BadNoise(NoiseModel),
    #[error("at least one shot is required")]
    NoShots,
}

/// A pure or mixed state.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl QuantumState {
    pub fn num_qubits(&self) -> usize {
        match self {
            QuantumState::Pure(s) => s.num_qubits(),
            QuantumState::Mixed(r) => r.num_qubits(),
        }
    }
}

impl From<StateVector> for QuantumState {
    fn from(s: StateVector) -> Self {
        QuantumState::Pure(s)
    }
}

impl From<DensityMatrix> for QuantumState {
    fn from(r: DensityMatrix) -> Self {
        QuantumState::Mixed(r)
    }
}

/// Fidelity of `noisy` with the ideal (logical) state once the routing
/// permutation in `final_layout` is undone: `|⟨ψ|φ⟩|²` for a pure state and
/// `⟨ψ|ρ|ψ⟩` for a mixed one.
///
/// `final_layout` maps each logical qubit to the physical qubit holding it
/// at the end of the compiled circuit. The noisy state lives on the physical
/// register, which may be wider than `ideal`; the extra qubits are expected
/// back in `|0⟩`.
///
/// ```
/// use qprune::circuit::{Circuit, Gate};
/// use qprune::compiler::Layout;
/// use qprune::simulator::{simulate_ideal, state_fidelity};
///
/// let ideal = simulate_ideal(&Circuit::from_gates("a", 2, [Gate::x(1)]).unwrap()).unwrap();
/// let moved = simulate_ideal(&Circuit::from_gates("b", 2, [Gate::x(0)]).unwrap()).unwrap();
/// let swapped = Layout::from_log_to_phys(vec![1, 0]).unwrap();
/// assert!((state_fidelity(&ideal, &moved.into(), &swapped).unwrap() - 1.0).abs() < 1e-12);
/// ```
pub fn state_fidelity(ideal: &StateVector, noisy: &QuantumState, final_layout: &Layout) -> Result<f64, SimError> {
    let width = noisy.num_qubits();
    if final_layout.len() != width {
        return Err(SimError::WidthMismatch { expected: width, got: final_layout.len() });
    }
    if ideal.num_qubits() > width {
        return Err(SimError::WidthMismatch { expected: width, got: ideal.num_qubits() });
    }
    let phi = ideal.embed(final_layout)?;
    let f = match noisy {
        QuantumState::Pure(psi) => phi.inner(psi).norm_sqr(),
        QuantumState::Mixed(rho) => rho.expectation(&phi),
    };
    Ok(f.clamp(0.0, 1.0))
}

/// Noisy fidelity of a compiled basis circuit with the ideal logical state.
///
/// Registers up to `dm_max_qubits` are evolved exactly; wider ones are
/// sampled with `shots` trajectories seeded by `seed`.
pub fn noisy_fidelity(
    ideal: &StateVector,
    compiled: &Circuit,
    final_layout: &Layout,
    noise: &NoiseModel,
    dm_max_qubits: usize,
    shots: usize,
    seed: u64,
) -> Result<FidelityEstimate, SimError> {
    if compiled.num_qubits() <= dm_max_qubits.min(MAX_DENSITY_QUBITS) {
        let rho = simulate_noisy_dm(compiled, noise)?;
        return Ok(FidelityEstimate::exact(state_fidelity(ideal, &rho.into(), final_layout)?));
    }
    if final_layout.len() != compiled.num_qubits() {
        return Err(SimError::WidthMismatch { expected: compiled.num_qubits(), got: final_layout.len() });
    }
    let reference = ideal.embed(final_layout)?;
    simulate_noisy_traj(compiled, noise, shots, seed, &reference)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::compiler::decompose_to_basis;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bell() -> Circuit {
        decompose_to_basis(&Circuit::from_gates("bell", 2, [Gate::h(0), Gate::cx(0, 1)]).unwrap())
    }

    #[test]
    fn fidelity_examples() {
        let zero = StateVector::zero(1);
        let one = StateVector::basis(1, 1);
        let id1 = Layout::identity(1);
        assert_eq!(state_fidelity(&zero, &zero.clone().into(), &id1).unwrap(), 1.0);
        assert_eq!(state_fidelity(&zero, &one.into(), &id1).unwrap(), 0.0);
        assert!(matches!(
            state_fidelity(&zero, &StateVector::zero(2).into(), &id1),
            Err(SimError::WidthMismatch { .. })
        ));
    }

    #[test]
    fn bell_pair_depolarizing() {
        let c = bell();
        let ideal = simulate_ideal(&c).unwrap();
        let noise = NoiseModel::depolarizing(0.01).unwrap();
        let rho = simulate_noisy_dm(&c, &noise).unwrap();
        let f = state_fidelity(&ideal, &rho.into(), &Layout::identity(2)).unwrap();
        assert!((f - 0.9925).abs() < 1e-9);
    }

    fn random_basis_circuit(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Circuit {
        let mut c = Circuit::new("r", n);
        for _ in 0..len {
            let q = rng.gen_range(0..n);
            let g = match rng.gen_range(0..5) {
                0 => Gate::sx(q),
                1 => Gate::x(q),
                2 | 3 => Gate::rz(rng.gen_range(-3.0..3.0), q),
                _ => {
                    let mut t = rng.gen_range(0..n - 1);
                    if t >= q {
                        t += 1;
                    }
                    Gate::cx(q, t)
                }
            };
            c.push(g).unwrap();
        }
        c
    }

    #[test]
    fn trajectories_agree_with_density_matrix_on_eight_qubits() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let c = random_basis_circuit(&mut rng, 8, 120);
        let noise = NoiseModel::new(0.01, 20e-6, 20e-6).unwrap();
        let ideal = simulate_ideal(&c).unwrap();
        let exact = simulate_noisy_dm(&c, &noise).unwrap().expectation(&ideal);
        let est = simulate_noisy_traj(&c, &noise, 4000, 1, &ideal).unwrap();
        assert!((est.mean - exact).abs() < 3.0 * est.stderr, "{est:?} vs {exact}");
    }

    /// Test-only positivity check: `ρ + εI` must admit a Cholesky factor.
    fn is_psd(rho: &DensityMatrix, eps: f64) -> bool {
        let n = rho.dim();
        let mut l = vec![num_complex::Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            let mut d = rho.get(j, j).re + eps;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if d <= 0.0 {
                return false;
            }
            let d = d.sqrt();
            l[j * n + j] = d.into();
            for i in j + 1..n {
                let mut s = rho.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / d;
            }
        }
        true
    }

    fn random_density_matrix(rng: &mut ChaCha8Rng) -> DensityMatrix {
        // Mixture of four random pure states.
        let mut data = vec![num_complex::Complex64::new(0.0, 0.0); 16];
        let weights: Vec<f64> = (0..4).map(|_| rng.gen::<f64>()).collect();
        let total: f64 = weights.iter().sum();
        for w in weights {
            let amps: Vec<_> =
                (0..4).map(|_| num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
            for r in 0..4 {
                for c in 0..4 {
                    data[r * 4 + c] += amps[r] * amps[c].conj() * (w / total / norm);
                }
            }
        }
        DensityMatrix::from_raw(2, data).unwrap()
    }

    #[test]
    fn channels_preserve_density_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(500);
        for _ in 0..500 {
            let mut rho = random_density_matrix(&mut rng);
            let t1 = rng.gen_range(1e-7..1e-5);
            let noise = NoiseModel::new(rng.gen(), t1, rng.gen_range(1e-8..2.0 * t1)).unwrap();
            rho.depolarize_pair(0, 1, noise.p2);
            rho.relax(0, noise.gamma(), noise.coherence_decay());
            rho.relax(1, noise.gamma(), noise.coherence_decay());
            assert!((rho.trace() - num_complex::Complex64::new(1.0, 0.0)).norm() < 1e-10);
            assert!(rho.hermiticity_error() < 1e-10);
            assert!(is_psd(&rho, 1e-9));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn trajectories_agree_with_density_matrix(seed in any::<u64>(), n in 4usize..=6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let len = rng.gen_range(10..60);
            let c = random_basis_circuit(&mut rng, n, len);
            let noise = NoiseModel::new(rng.gen_range(0.0..0.05), 10e-6, 10e-6).unwrap();
            let ideal = simulate_ideal(&c).unwrap();
            let exact = simulate_noisy_dm(&c, &noise).unwrap().expectation(&ideal);
            let est = simulate_noisy_traj(&c, &noise, 2000, seed, &ideal).unwrap();
            prop_assert!((est.mean - exact).abs() <= 4.0 * est.stderr + 1e-12, "{:?} vs {}", est, exact);
        }
    }
}
