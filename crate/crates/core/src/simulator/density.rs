// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

//! Density-matrix evolution.
//!
//! `ρ` is stored row-major. Read as a vector over `2n` qubits, column qubit
//! `q` is bit `q` and row qubit `q` is bit `n + q`, so `UρU†` is `U` applied
//! to the row bits followed by `conj(U)` applied to the column bits.

use num_complex::Complex64 as C;

use super::kernels::{apply_1q, apply_2q, conj2, conj4, group_indices, M2, M4};
use super::noise::{NoiseModel, Program};
use super::statevector::StateVector;
use super::SimError;
use crate::circuit::Circuit;

/// Widest register [`simulate_noisy_dm`] accepts (a 16 MiB matrix).
pub const MAX_DENSITY_QUBITS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    data: Vec<C>,
}

impl DensityMatrix {
    pub fn from_pure(state: &StateVector) -> DensityMatrix {
        let amps = state.amplitudes();
        let dim = amps.len();
        let mut data = vec![C::new(0.0, 0.0); dim * dim];
        for (r, a) in amps.iter().enumerate() {
            for (c, b) in amps.iter().enumerate() {
                data[r * dim + c] = a * b.conj();
            }
        }
        DensityMatrix { num_qubits: state.num_qubits(), data }
    }

    /// Wraps a row-major `2^n × 2^n` matrix.
    pub fn from_raw(num_qubits: usize, data: Vec<C>) -> Option<DensityMatrix> {
        (data.len() == 1 << (2 * num_qubits)).then_some(DensityMatrix { num_qubits, data })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> C {
        self.data[row * self.dim() + col]
    }

    pub fn as_slice(&self) -> &[C] {
        &self.data
    }

    pub fn trace(&self) -> C {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// Largest `|ρ_rc − conj(ρ_cr)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    /// `⟨φ|ρ|φ⟩`, skipping zero amplitudes of `φ`.
    pub fn expectation(&self, phi: &StateVector) -> f64 {
        let dim = self.dim();
        let support: Vec<(usize, C)> =
            phi.amplitudes().iter().copied().enumerate().filter(|(_, a)| a.norm_sqr() > 0.0).collect();
        let mut acc = C::new(0.0, 0.0);
        for &(r, ar) in &support {
            let row = &self.data[r * dim..(r + 1) * dim];
            let inner: C = support.iter().map(|&(c, ac)| row[c] * ac).sum();
            acc += ar.conj() * inner;
        }
        acc.re
    }

    pub fn apply_unitary_1q(&mut self, q: usize, m: &M2) {
        apply_1q(&mut self.data, self.num_qubits + q, m);
        apply_1q(&mut self.data, q, &conj2(m));
    }

    pub fn apply_unitary_2q(&mut self, q0: usize, q1: usize, m: &M4) {
        let n = self.num_qubits;
        apply_2q(&mut self.data, n + q0, n + q1, m);
        apply_2q(&mut self.data, q0, q1, &conj4(m));
    }

    /// `ρ → (1−p)ρ + p·Tr_{a,b}(ρ) ⊗ I/4`.
    pub fn depolarize_pair(&mut self, a: usize, b: usize, p: f64) {
        if p == 0.0 {
            return;
        }
        let n = self.num_qubits;
        let (ra, rb) = (1usize << (n + a), 1usize << (n + b));
        let mut bits = [a, b, n + a, n + b];
        bits.sort_unstable();
        let keep = 1.0 - p;
        for g in 0..self.data.len() >> 4 {
            let mut base = g;
            for &bit in &bits {
                let low = base & ((1 << bit) - 1);
                base = ((base ^ low) << 1) | low;
            }
            let cols = group_indices(0, a, b).map(|o| base | o);
            let diag = |k: usize| cols[k] | if k & 2 != 0 { ra } else { 0 } | if k & 1 != 0 { rb } else { 0 };
            let trace: C = (0..4).map(|k| self.data[diag(k)]).sum();
            for rk in 0..4 {
                let row_off = if rk & 2 != 0 { ra } else { 0 } | if rk & 1 != 0 { rb } else { 0 };
                for &col in &cols {
                    self.data[col | row_off] *= keep;
                }
            }
            for k in 0..4 {
                self.data[diag(k)] += trace * (p / 4.0);
            }
        }
    }

    /// Amplitude damping with probability `gamma` composed with dephasing, so
    /// the populations relax and the coherences of qubit `q` shrink by `decay`.
    pub fn relax(&mut self, q: usize, gamma: f64, decay: f64) {
        if gamma == 0.0 && decay == 1.0 {
            return;
        }
        let n = self.num_qubits;
        for [v00, v01, v10, v11] in (0..self.data.len() >> 2).map(|g| group_indices(g, n + q, q)) {
            let excited = self.data[v11];
            self.data[v00] += excited * gamma;
            self.data[v11] = excited * (1.0 - gamma);
            self.data[v01] *= decay;
            self.data[v10] *= decay;
        }
    }
}

/// Exact noisy evolution of a basis circuit from `|0…0⟩`.
pub fn simulate_noisy_dm(circuit: &Circuit, noise: &NoiseModel) -> Result<DensityMatrix, SimError> {
    if circuit.num_qubits() > MAX_DENSITY_QUBITS {
        return Err(SimError::TooWide { qubits: circuit.num_qubits(), limit: MAX_DENSITY_QUBITS });
    }
    let noise = noise.validated()?;
    let program = Program::compile(circuit)?;
    let mut rho = DensityMatrix::from_pure(&StateVector::zero(circuit.num_qubits()));
    let (gamma, decay) = (noise.gamma(), noise.coherence_decay());
    for step in &program.steps {
        rho.apply_unitary_2q(step.control, step.target, &step.unitary);
        rho.depolarize_pair(step.control, step.target, noise.p2);
        rho.relax(step.control, gamma, decay);
        rho.relax(step.target, gamma, decay);
    }
    for (q, m) in &program.tail {
        rho.apply_unitary_1q(*q, m);
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::simulator::simulate_ideal;

    #[test]
    fn full_depolarization_gives_maximally_mixed_pair() {
        let c = Circuit::from_gates("cx", 2, [Gate::cx(0, 1)]).unwrap();
        let rho = simulate_noisy_dm(&c, &NoiseModel::depolarizing(1.0).unwrap()).unwrap();
        for r in 0..4 {
            for col in 0..4 {
                let expect = if r == col { 0.25 } else { 0.0 };
                assert!((rho.get(r, col) - C::new(expect, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn noiseless_limit_matches_statevector() {
        let c = Circuit::from_gates(
            "c",
            3,
            [Gate::rz(0.3, 0), Gate::sx(0), Gate::cx(0, 2), Gate::sx(1), Gate::cx(2, 1), Gate::rz(1.1, 1), Gate::x(2)],
        )
        .unwrap();
        let noise = NoiseModel::new(0.0, 1e9, 1e9).unwrap();
        let rho = simulate_noisy_dm(&c, &noise).unwrap();
        let psi = simulate_ideal(&c).unwrap();
        let pure = DensityMatrix::from_pure(&psi);
        for (a, b) in rho.as_slice().iter().zip(pure.as_slice()) {
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn relaxation_of_excited_qubit() {
        let c = Circuit::from_gates("x", 2, [Gate::x(0), Gate::cx(0, 1)]).unwrap();
        let noise = NoiseModel::new(0.0, 1e-6, 1e-6).unwrap();
        let rho = simulate_noisy_dm(&c, &noise).unwrap();
        let g = noise.gamma();
        // |11⟩ decays independently on both qubits.
        assert!((rho.get(3, 3).re - (1.0 - g) * (1.0 - g)).abs() < 1e-14);
        assert!((rho.get(0, 0).re - g * g).abs() < 1e-14);
        assert!((rho.trace().re - 1.0).abs() < 1e-14);
    }
}
