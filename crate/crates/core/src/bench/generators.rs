// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, Gate};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("{family} needs at least {min} qubits, got {n}")]
    TooNarrow { family: Family, n: usize, min: usize },
    #[error("layers must be at least 1")]
    NoLayers,
}

/// Benchmark circuit families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Qft,
    #[serde(alias = "qftentangled")]
    QftEntangled,
    #[serde(alias = "ae")]
    AmplitudeEstimation,
    Qaoa,
    #[serde(alias = "portfolioqaoa")]
    PortfolioQaoa,
    RandomParametric,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Qft,
        Family::QftEntangled,
        Family::AmplitudeEstimation,
        Family::Qaoa,
        Family::PortfolioQaoa,
        Family::RandomParametric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Qft => "qft",
            Family::QftEntangled => "qft_entangled",
            Family::AmplitudeEstimation => "amplitude_estimation",
            Family::Qaoa => "qaoa",
            Family::PortfolioQaoa => "portfolio_qaoa",
            Family::RandomParametric => "random_parametric",
        }
    }

    /// Accepts the serialized names and the short aliases `ae`,
    /// `qftentangled` and `portfolioqaoa`.
    pub fn parse(s: &str) -> Option<Family> {
        serde_json::from_value(serde_json::Value::String(s.to_ascii_lowercase())).ok()
    }

    /// Whether the generated circuit depends on the seed.
    pub fn is_seeded(self) -> bool {
        matches!(self, Family::Qaoa | Family::PortfolioQaoa | Family::RandomParametric)
    }

    pub fn min_width(self) -> usize {
        match self {
            Family::Qft | Family::QftEntangled | Family::RandomParametric => 2,
            _ => 3,
        }
    }

    /// Builds the `n`-qubit member of the family. `layers` only affects the
    /// QAOA families; `seed` only the seeded ones.
    pub fn generate(self, n: usize, layers: usize, seed: u64) -> Result<Circuit, GeneratorError> {
        match self {
            Family::Qft => gen_qft(n, false),
            Family::QftEntangled => gen_qft(n, true),
            Family::AmplitudeEstimation => gen_amplitude_estimation(n),
            Family::Qaoa => gen_qaoa(n, layers, seed, false),
            Family::PortfolioQaoa => gen_qaoa(n, layers, seed, true),
            Family::RandomParametric => gen_random_parametric(n, seed),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn check_width(family: Family, n: usize) -> Result<(), GeneratorError> {
    if n < family.min_width() {
        return Err(GeneratorError::TooNarrow { family, n, min: family.min_width() });
    }
    Ok(())
}

fn build(name: String, n: usize, gates: Vec<Gate>) -> Circuit {
    Circuit::from_gates(name, n, gates).expect("generated gates are in range")
}

fn qft_gates(qubits: &[usize], gates: &mut Vec<Gate>) {
    let n = qubits.len();
    for i in 0..n {
        gates.push(Gate::h(qubits[i]));
        for k in i + 1..n {
            gates.push(Gate::cp(PI / (1u64 << (k - i)) as f64, qubits[k], qubits[i]));
        }
    }
    for i in 0..n / 2 {
        gates.push(Gate::swap(qubits[i], qubits[n - 1 - i]));
    }
}

fn inverse_qft_gates(qubits: &[usize], gates: &mut Vec<Gate>) {
    let mut forward = Vec::new();
    qft_gates(qubits, &mut forward);
    for g in forward.iter().rev() {
        gates.extend(g.inverse_sequence());
    }
}

/// Quantum Fourier transform with the final qubit-reversal SWAPs. The
/// entangled variant first prepares a GHZ state.
///
/// ```
/// use qprune::bench::gen_qft;
/// use qprune::circuit::GateKind;
///
/// let qft = gen_qft(4, false).unwrap();
/// assert_eq!(qft.count_gates(Some(GateKind::Cp)), 6);
/// assert_eq!(qft.count_gates(Some(GateKind::Swap)), 2);
/// ```
pub fn gen_qft(n: usize, entangled: bool) -> Result<Circuit, GeneratorError> {
    let family = if entangled { Family::QftEntangled } else { Family::Qft };
    check_width(family, n)?;
    let mut gates = Vec::new();
    if entangled {
        gates.push(Gate::h(0));
        gates.extend((0..n - 1).map(|q| Gate::cx(q, q + 1)));
    }
    qft_gates(&(0..n).collect::<Vec<_>>(), &mut gates);
    Ok(build(format!("{}_{n}", family.name()), n, gates))
}

/// Rotation angle of the amplitude-estimation state preparation, which
/// encodes the amplitude 0.2.
pub fn amplitude_estimation_theta() -> f64 {
    2.0 * 0.2f64.sqrt().asin()
}

/// `RY(θ)` as `RZ(π/2)·H·RZ(θ)·H·RZ(−π/2)`.
fn ry_gates(theta: f64, q: usize) -> [Gate; 5] {
    [Gate::rz(-FRAC_PI_2, q), Gate::h(q), Gate::rz(theta, q), Gate::h(q), Gate::rz(FRAC_PI_2, q)]
}

/// Canonical amplitude estimation: qubits `0..n-1` are the evaluation
/// register and qubit `n-1` holds the estimated amplitude. With `m = n-1`
/// evaluation qubits, qubit `j` controls `CRY(2^(m-1-j)·θ₀)` (qubit 0 is the
/// most significant, as in [`gen_qft`]) and the register finishes with an
/// inverse QFT.
pub fn gen_amplitude_estimation(n: usize) -> Result<Circuit, GeneratorError> {
    check_width(Family::AmplitudeEstimation, n)?;
    let theta = amplitude_estimation_theta();
    let target = n - 1;
    let eval: Vec<usize> = (0..n - 1).collect();
    let mut gates = Vec::new();
    gates.extend(ry_gates(theta, target));
    gates.extend(eval.iter().map(|&q| Gate::h(q)));
    let m = eval.len();
    for &j in &eval {
        gates.push(Gate::cry((1u64 << (m - 1 - j)) as f64 * theta, j, target));
    }
    inverse_qft_gates(&eval, &mut gates);
    Ok(build(format!("amplitude_estimation_{n}"), n, gates))
}

/// Random simple graph with every degree 3 when `n` is even; for odd `n` a
/// ring with chords.
fn three_regular_like(n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    if n % 2 == 0 && n >= 4 {
        for _ in 0..1000 {
            let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v, v, v]).collect();
            stubs.shuffle(rng);
            let mut edges = BTreeSet::new();
            let ok = stubs.chunks_exact(2).all(|p| {
                let e = (p[0].min(p[1]), p[0].max(p[1]));
                p[0] != p[1] && edges.insert(e)
            });
            if ok {
                return edges.into_iter().collect();
            }
        }
    }
    let mut edges = BTreeSet::new();
    for v in 0..n {
        edges.insert((v.min((v + 1) % n), v.max((v + 1) % n)));
    }
    for v in 0..n / 2 {
        let w = v + n / 2;
        if w != v + 1 && !(v == 0 && w == n - 1) {
            edges.insert((v, w));
        }
    }
    edges.into_iter().collect()
}

/// QAOA ansatz: a Hadamard layer, then per layer one `RZZ(γ·w)` per problem
/// edge and an `RX(2β)` mixer written as `H·RZ·H`.
///
/// `portfolio` selects a complete graph with weights in `[0.05, 0.5]`;
/// otherwise the graph is random 3-regular (or close to it for odd `n`)
/// with unit weights. All randomness comes from `seed`.
pub fn gen_qaoa(n: usize, layers: usize, seed: u64, portfolio: bool) -> Result<Circuit, GeneratorError> {
    let family = if portfolio { Family::PortfolioQaoa } else { Family::Qaoa };
    check_width(family, n)?;
    if layers == 0 {
        return Err(GeneratorError::NoLayers);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize, f64)> = if portfolio {
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                out.push((a, b, rng.gen_range(0.05..=0.5)));
            }
        }
        out
    } else {
        three_regular_like(n, &mut rng).into_iter().map(|(a, b)| (a, b, 1.0)).collect()
    };
    let mut open_angle = || loop {
        let x = rng.gen_range(0.0..PI);
        if x > 0.0 {
            return x;
        }
    };
    let params: Vec<(f64, f64)> = (0..layers).map(|_| (open_angle(), open_angle())).collect();

    let mut gates: Vec<Gate> = (0..n).map(Gate::h).collect();
    for (gamma, beta) in params {
        gates.extend(edges.iter().map(|&(a, b, w)| Gate::rzz(gamma * w, a, b)));
        for q in 0..n {
            gates.extend([Gate::h(q), Gate::rz(2.0 * beta, q), Gate::h(q)]);
        }
    }
    Ok(build(format!("{}_{n}", family.name()), n, gates))
}

/// Stress circuit: `3n` layers, each a Hadamard or `RZ` on a random qubit
/// followed by a random prunable gate on a random pair. Angles are
/// log-uniform between 1e-3 and π with a random sign.
pub fn gen_random_parametric(n: usize, seed: u64) -> Result<Circuit, GeneratorError> {
    check_width(Family::RandomParametric, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gates = Vec::new();
    for _ in 0..3 * n {
        let q = rng.gen_range(0..n);
        if rng.gen_bool(0.5) {
            gates.push(Gate::h(q));
        } else {
            gates.push(Gate::rz(rng.gen_range(-PI..PI), q));
        }
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let magnitude = (rng.gen_range(1e-3f64.ln()..PI.ln())).exp();
        let theta = if rng.gen_bool(0.5) { magnitude } else { -magnitude };
        gates.push(match rng.gen_range(0..5) {
            0 => Gate::crz(theta, a, b),
            1 => Gate::crx(theta, a, b),
            2 => Gate::cry(theta, a, b),
            3 => Gate::cp(theta, a, b),
            _ => Gate::rzz(theta, a, b),
        });
    }
    Ok(build(format!("random_parametric_{n}"), n, gates))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;
    use crate::compiler::decompose_to_basis;
    use crate::simulator::simulate_ideal;

    #[test]
    fn qft_two() {
        let c = gen_qft(2, false).unwrap();
        assert_eq!(c.gates(), &[Gate::h(0), Gate::cp(FRAC_PI_2, 1, 0), Gate::h(1), Gate::swap(0, 1)]);
    }

    #[test]
    fn qft_four_angles() {
        let c = gen_qft(4, false).unwrap();
        let mut angles: Vec<f64> = c.gates().iter().filter_map(|g| g.angle()).collect();
        angles.sort_by(f64::total_cmp);
        assert_eq!(angles, vec![PI / 8.0, PI / 4.0, PI / 4.0, PI / 2.0, PI / 2.0, PI / 2.0]);
    }

    #[test]
    fn qft_entangled_prefix() {
        let plain = gen_qft(3, false).unwrap();
        let ent = gen_qft(3, true).unwrap();
        assert_eq!(ent.len(), plain.len() + 3);
        assert_eq!(&ent.gates()[..3], &[Gate::h(0), Gate::cx(0, 1), Gate::cx(1, 2)]);
        assert!(gen_qft(1, false).is_err());
    }

    #[test]
    fn qft_of_zero_is_uniform() {
        for n in 2..=6 {
            let s = simulate_ideal(&gen_qft(n, false).unwrap()).unwrap();
            let expect = (0.5f64).powf(n as f64 / 2.0);
            for a in s.amplitudes() {
                assert!((a.re - expect).abs() < 1e-12 && a.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn amplitude_estimation_structure() {
        let theta = amplitude_estimation_theta();
        assert!((theta - 0.9272952180016122).abs() < 1e-15);
        let c = gen_amplitude_estimation(3).unwrap();
        let cry: Vec<f64> =
            c.gates().iter().filter(|g| g.kind() == GateKind::Cry).map(|g| g.angle().unwrap()).collect();
        assert_eq!(cry, vec![2.0 * theta, theta]);
        for n in 3..=8 {
            let c = gen_amplitude_estimation(n).unwrap();
            let m = n - 1;
            assert_eq!(c.count_prunable(), m + m * (m - 1) / 2);
        }
        assert!(gen_amplitude_estimation(2).is_err());
    }

    #[test]
    fn amplitude_estimation_peaks_at_the_rotation_phase() {
        // RY(θ₀) has eigenphases ±θ₀/2, so the register reads ±θ₀/(4π).
        let n = 7;
        let m = n - 1;
        let s = simulate_ideal(&gen_amplitude_estimation(n).unwrap()).unwrap();
        let mut probs = vec![0.0; 1 << m];
        for (i, a) in s.amplitudes().iter().enumerate() {
            let y = (0..m).fold(0, |acc, j| acc << 1 | (i >> j & 1));
            probs[y] += a.norm_sqr();
        }
        let (best, _) = probs.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
        let phase = amplitude_estimation_theta() / (4.0 * PI) * (1 << m) as f64;
        let dist = (best as f64 - phase).abs().min((best as f64 - ((1 << m) as f64 - phase)).abs());
        assert!(dist < 1.0, "{best} vs {phase}");
    }

    #[test]
    fn qaoa_shapes() {
        let p = gen_qaoa(5, 1, 3, true).unwrap();
        assert_eq!(p.count_gates(Some(GateKind::Rzz)), 10);
        let q = gen_qaoa(6, 2, 9, false).unwrap();
        assert_eq!(q.count_gates(Some(GateKind::Rzz)), 18);
        let mut degree = [0; 6];
        for g in q.gates().iter().filter(|g| g.kind() == GateKind::Rzz).take(9) {
            degree[g.qubits()[0]] += 1;
            degree[g.qubits()[1]] += 1;
        }
        assert_eq!(degree, [3; 6]);
        assert_eq!(gen_qaoa(6, 2, 9, false).unwrap(), q);
        assert_ne!(gen_qaoa(6, 2, 10, false).unwrap(), q);
        assert!(gen_qaoa(7, 1, 0, false).is_ok());
        assert_eq!(gen_qaoa(6, 0, 0, false), Err(GeneratorError::NoLayers));
    }

    #[test]
    fn decomposition_preserves_every_family() {
        for family in Family::ALL {
            for n in [3, 4, 5] {
                let c = family.generate(n, 1, 5).unwrap();
                let a = simulate_ideal(&c).unwrap();
                let b = simulate_ideal(&decompose_to_basis(&c)).unwrap();
                assert!((a.inner(&b).norm_sqr() - 1.0).abs() < 1e-9, "{family} {n}");
            }
        }
    }

    #[test]
    fn family_names() {
        for f in Family::ALL {
            assert_eq!(Family::parse(f.name()), Some(f));
        }
        assert_eq!(Family::parse("ae"), Some(Family::AmplitudeEstimation));
        assert_eq!(Family::parse("qftentangled"), Some(Family::QftEntangled));
        assert_eq!(Family::parse("nope"), None);
    }
}
