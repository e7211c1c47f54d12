// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

//! Monte-Carlo unravelling of the CX noise model on statevectors.
//!
//! Every CX is followed by five noise slots: a two-qubit depolarizing event,
//! amplitude damping on control and target, and a phase flip on control and
//! target. The depolarizing and phase-flip events have fixed probabilities,
//! so each trajectory draws the position of its next such event up front.
//! Amplitude damping is unravelled with a waiting-time threshold: the
//! trajectory jumps at the first damping slot where the squared norm of the
//! no-jump state drops below a uniform threshold.
//!
//! Trajectories that have not had an event yet follow the same (no-jump)
//! state, so they are simulated together as a group. When some members have
//! an event they split off into a child group that starts from the post-event
//! state. Each trajectory owns its random stream, so its result does not
//! depend on which other trajectories it was grouped with.

use std::collections::BTreeMap;

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernels::{apply_1q, dagger2, group_indices, pauli, M4};
use super::noise::{NoiseModel, Program};
use super::statevector::{StateVector, MAX_STATEVECTOR_QUBITS};
use super::SimError;
use crate::circuit::Circuit;

/// Monte-Carlo estimate of a fidelity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityEstimate {
    pub mean: f64,
    /// Standard error of the mean; zero for exact values.
    pub stderr: f64,
    /// Number of trajectories, zero for exact values.
    pub shots: usize,
}

impl FidelityEstimate {
    pub fn exact(value: f64) -> FidelityEstimate {
        FidelityEstimate { mean: value, stderr: 0.0, shots: 0 }
    }

    fn from_samples(samples: &[f64]) -> FidelityEstimate {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let stderr = if samples.len() > 1 {
            let var = samples.iter().map(|f| (f - mean) * (f - mean)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        FidelityEstimate { mean, stderr, shots: samples.len() }
    }
}

const UNITARY: u8 = 0;
const DEPOLARIZE: u8 = 1;
const DAMP_CONTROL: u8 = 2;
const DAMP_TARGET: u8 = 3;
const FLIP_CONTROL: u8 = 4;
const FLIP_TARGET: u8 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Pos {
    step: usize,
    slot: u8,
}

impl Pos {
    fn after(self) -> Pos {
        if self.slot == FLIP_TARGET {
            Pos { step: self.step + 1, slot: UNITARY }
        } else {
            Pos { step: self.step, slot: self.slot + 1 }
        }
    }
}

struct Trajectory {
    id: usize,
    rng: ChaCha8Rng,
    next_event: Option<Pos>,
    threshold: f64,
}

/// Damping factors on a qubit pair: amplitude `i` scales by
/// `da[bit_a(i)]·db[bit_b(i)]`.
#[derive(Clone, Copy, PartialEq)]
struct Diag {
    a: usize,
    b: usize,
    da: [f64; 2],
    db: [f64; 2],
}

impl Diag {
    fn unit(a: usize, b: usize) -> Diag {
        Diag { a, b, da: [1.0; 2], db: [1.0; 2] }
    }

    /// Factor for local index `k = 2·bit_a + bit_b`.
    fn local(&self, k: usize) -> f64 {
        self.da[k >> 1] * self.db[k & 1]
    }

    /// Squared norm of the scaled state given the pair's unscaled weights.
    fn weight(&self, sums: &[f64; 4]) -> f64 {
        (0..4).map(|k| self.local(k) * self.local(k) * sums[k]).sum()
    }

    /// `self / other`, factor by factor.
    fn ratio(&self, other: &Diag) -> Diag {
        Diag {
            da: [self.da[0] / other.da[0], self.da[1] / other.da[1]],
            db: [self.db[0] / other.db[0], self.db[1] / other.db[1]],
            ..*self
        }
    }

    fn apply(&self, buf: &mut [C]) {
        if self.da == [1.0; 2] && self.db == [1.0; 2] {
            return;
        }
        let (sa, sb) = (1usize << self.a, 1usize << self.b);
        for (i, z) in buf.iter_mut().enumerate() {
            *z *= self.da[usize::from(i & sa != 0)] * self.db[usize::from(i & sb != 0)];
        }
    }
}

struct Engine<'a> {
    program: &'a Program,
    reference: Vec<C>,
    depolarize: f64,
    flip: f64,
    gamma: f64,
    keep: f64,
    any_event: f64,
}

impl Engine<'_> {
    fn independent_prob(&self, slot: u8) -> f64 {
        match slot {
            DEPOLARIZE => self.depolarize,
            FLIP_CONTROL | FLIP_TARGET => self.flip,
            _ => 0.0,
        }
    }

    /// Position of the next depolarizing or phase-flip event at or after `from`.
    fn sample_next_event(&self, rng: &mut ChaCha8Rng, from: Pos) -> Option<Pos> {
        let steps = self.program.steps.len();
        if from.step >= steps {
            return None;
        }
        for slot in [DEPOLARIZE, FLIP_CONTROL, FLIP_TARGET] {
            if slot >= from.slot && rng.gen::<f64>() < self.independent_prob(slot) {
                return Some(Pos { step: from.step, slot });
            }
        }
        if self.any_event <= 0.0 {
            return None;
        }
        let u: f64 = 1.0 - rng.gen::<f64>();
        let skipped = (u.ln() / (-self.any_event).ln_1p()).floor();
        let step = from.step as f64 + 1.0 + skipped;
        if step >= steps as f64 {
            return None;
        }
        let v = rng.gen::<f64>() * self.any_event;
        let (pd, pz) = (self.depolarize, self.flip);
        let slot = if v < pd {
            DEPOLARIZE
        } else if v < pd + (1.0 - pd) * pz {
            FLIP_CONTROL
        } else {
            FLIP_TARGET
        };
        Some(Pos { step: step as usize, slot })
    }

    /// Damping of both operands when neither jumps.
    fn no_jump(&self, a: usize, b: usize) -> Diag {
        Diag { a, b, da: [1.0, self.keep], db: [1.0, self.keep] }
    }

    fn pair_sums(buf: &[C], a: usize, b: usize) -> [f64; 4] {
        let mut sums = [0.0; 4];
        for g in 0..buf.len() >> 2 {
            for (k, &i) in group_indices(g, a, b).iter().enumerate() {
                sums[k] += buf[i].norm_sqr();
            }
        }
        sums
    }

    fn normalize(buf: &mut [C]) {
        let norm = buf.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in buf.iter_mut() {
            *z /= norm;
        }
    }

    fn fidelity_of(&self, buf: &[C]) -> f64 {
        let mut overlap = C::new(0.0, 0.0);
        let mut norm = 0.0;
        for (z, r) in buf.iter().zip(&self.reference) {
            overlap += r.conj() * z;
            norm += z.norm_sqr();
        }
        overlap.norm_sqr() / norm
    }

    /// Starts a child group from `buf` rescaled by `scale` and acted on by `op`.
    fn spawn(
        &self,
        buf: &[C],
        scale: Diag,
        op: impl FnOnce(&mut [C]),
        from: Pos,
        members: Vec<Trajectory>,
        out: &mut [f64],
    ) {
        let mut child = buf.to_vec();
        scale.apply(&mut child);
        op(&mut child);
        Engine::normalize(&mut child);
        self.run_group(child, from, members, out);
    }

    /// Evolves `buf` (the state just before `start`) along the no-jump path
    /// shared by `active`, splitting off child groups at events.
    ///
    /// Steps entered at the unitary slot apply the no-jump damping in the
    /// same pass as the unitary, so the buffer runs ahead of the slot being
    /// examined; `applied` records by how much.
    fn run_group(&self, mut buf: Vec<C>, start: Pos, mut active: Vec<Trajectory>, out: &mut [f64]) {
        for t in &mut active {
            t.next_event = self.sample_next_event(&mut t.rng, start);
            t.threshold = 1.0 - t.rng.gen::<f64>();
        }
        let steps = &self.program.steps;

        for step_idx in start.step..steps.len() {
            let step = &steps[step_idx];
            let (a, b) = (step.control, step.target);
            let first = if step_idx == start.step { start.slot } else { UNITARY };
            let (sums, applied) = if first == UNITARY {
                let damp = if self.gamma > 0.0 { self.no_jump(a, b) } else { Diag::unit(a, b) };
                (scaled_unitary_pass(&mut buf, a, b, &step.unitary, &damp), damp)
            } else {
                (Engine::pair_sums(&buf, a, b), Diag::unit(a, b))
            };
            // Damping reached so far at the current slot.
            let mut diag = Diag::unit(a, b);

            for slot in first.max(DEPOLARIZE)..=FLIP_TARGET {
                let here = Pos { step: step_idx, slot };
                match slot {
                    DEPOLARIZE | FLIP_CONTROL | FLIP_TARGET => {
                        if !active.iter().any(|t| t.next_event == Some(here)) {
                            continue;
                        }
                        let (leaving, staying): (Vec<_>, Vec<_>) =
                            active.into_iter().partition(|t| t.next_event == Some(here));
                        active = staying;
                        let scale = diag.ratio(&applied);
                        if slot == DEPOLARIZE {
                            let mut by_pauli: BTreeMap<usize, Vec<Trajectory>> = BTreeMap::new();
                            for mut t in leaving {
                                let k = t.rng.gen_range(1..16);
                                by_pauli.entry(k).or_default().push(t);
                            }
                            for (k, members) in by_pauli {
                                let op = |child: &mut [C]| {
                                    if k >> 2 != 0 {
                                        apply_1q(child, a, &pauli(k >> 2));
                                    }
                                    if k & 3 != 0 {
                                        apply_1q(child, b, &pauli(k & 3));
                                    }
                                };
                                self.spawn(&buf, scale, op, here.after(), members, out);
                            }
                        } else {
                            let q = if slot == FLIP_CONTROL { a } else { b };
                            let op = |child: &mut [C]| apply_1q(child, q, &pauli(3));
                            self.spawn(&buf, scale, op, here.after(), leaving, out);
                        }
                    }
                    DAMP_CONTROL | DAMP_TARGET => {
                        if self.gamma == 0.0 {
                            continue;
                        }
                        let before = diag;
                        if slot == DAMP_CONTROL {
                            diag.da[1] *= self.keep;
                        } else {
                            diag.db[1] *= self.keep;
                        }
                        let survive = diag.weight(&sums);
                        if !active.iter().any(|t| t.threshold > survive) {
                            continue;
                        }
                        let (leaving, staying): (Vec<_>, Vec<_>) =
                            active.into_iter().partition(|t| t.threshold > survive);
                        active = staying;
                        let q = if slot == DAMP_CONTROL { a } else { b };
                        let jump = [[C::new(0.0, 0.0), C::new(self.gamma.sqrt(), 0.0)], [C::new(0.0, 0.0); 2]];
                        let op = |child: &mut [C]| apply_1q(child, q, &jump);
                        self.spawn(&buf, before.ratio(&applied), op, here.after(), leaving, out);
                    }
                    _ => unreachable!("slot {slot}"),
                }
                if active.is_empty() {
                    return;
                }
            }
            if diag != applied {
                diag.ratio(&applied).apply(&mut buf);
            }
        }

        let f = self.fidelity_of(&buf);
        for t in &active {
            out[t.id] = f;
        }
    }
}

/// Per-trajectory fidelities `|⟨reference|ψ_k⟩|²` for `shots` trajectories of
/// `circuit` under `noise`. `reference` must be on the same register as the
/// circuit (physical order for compiled circuits).
pub fn trajectory_fidelities(
    circuit: &Circuit,
    noise: &NoiseModel,
    shots: usize,
    seed: u64,
    reference: &StateVector,
) -> Result<Vec<f64>, SimError> {
    let n = circuit.num_qubits();
    if n > MAX_STATEVECTOR_QUBITS {
        return Err(SimError::TooWide { qubits: n, limit: MAX_STATEVECTOR_QUBITS });
    }
    if reference.num_qubits() != n {
        return Err(SimError::WidthMismatch { expected: n, got: reference.num_qubits() });
    }
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    let noise = noise.validated()?;
    let program = Program::compile(circuit)?;

    let mut reference = reference.clone();
    for (q, m) in &program.tail {
        apply_1q(reference.amplitudes_mut(), *q, &dagger2(m));
    }
    let depolarize = noise.p2 * 15.0 / 16.0;
    let flip = noise.phase_flip();
    let gamma = noise.gamma();
    let engine = Engine {
        program: &program,
        reference: reference.into_amplitudes(),
        depolarize,
        flip,
        gamma,
        // Kept away from zero so the damping can be divided out again.
        keep: (1.0 - gamma).sqrt().max(1e-150),
        any_event: 1.0 - (1.0 - depolarize) * (1.0 - flip) * (1.0 - flip),
    };

    // Results do not depend on how shots are split, only on (seed, shot id).
    let chunk = shots.div_ceil(rayon::current_num_threads().max(1));
    let starts: Vec<usize> = (0..shots).step_by(chunk).collect();
    let parts: Vec<Vec<f64>> = starts
        .par_iter()
        .map(|&lo| {
            let hi = (lo + chunk).min(shots);
            let members = (lo..hi)
                .map(|id| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(id as u64);
                    Trajectory { id: id - lo, rng, next_event: None, threshold: 1.0 }
                })
                .collect();
            let mut out = vec![0.0; hi - lo];
            let mut start = vec![C::new(0.0, 0.0); 1 << n];
            start[0] = C::new(1.0, 0.0);
            engine.run_group(start, Pos { step: 0, slot: UNITARY }, members, &mut out);
            out
        })
        .collect();
    Ok(parts.concat())
}

/// Trajectory estimate of `⟨reference|ρ|reference⟩` with its standard error.
pub fn simulate_noisy_traj(
    circuit: &Circuit,
    noise: &NoiseModel,
    shots: usize,
    seed: u64,
    reference: &StateVector,
) -> Result<FidelityEstimate, SimError> {
    let samples = trajectory_fidelities(circuit, noise, shots, seed, reference)?;
    Ok(FidelityEstimate::from_samples(&samples))
}

/// `m` as `out[r] = phase[r]·in[perm[r]]` when every row has one non-zero.
fn monomial(m: &M4) -> Option<([usize; 4], [C; 4])> {
    let mut perm = [0; 4];
    let mut phase = [C::new(0.0, 0.0); 4];
    for (r, row) in m.iter().enumerate() {
        let mut nonzero = row.iter().enumerate().filter(|(_, z)| **z != C::new(0.0, 0.0));
        let (c, z) = nonzero.next()?;
        if nonzero.next().is_some() {
            return None;
        }
        perm[r] = c;
        phase[r] = *z;
    }
    Some((perm, phase))
}

/// Applies `damp·m` on `(a, b)` and returns the squared weights of the four
/// `(bit_a, bit_b)` sectors between `m` and `damp`.
fn scaled_unitary_pass(buf: &mut [C], a: usize, b: usize, m: &M4, damp: &Diag) -> [f64; 4] {
    let mut m = *m;
    for (r, row) in m.iter_mut().enumerate() {
        for z in row.iter_mut() {
            *z *= damp.local(r);
        }
    }
    let mut sums = match monomial(&m) {
        // CX after diagonal single-qubit gates.
        Some(([0, 1, 3, 2], p)) => pass(buf, a, b, |v| [p[0] * v[0], p[1] * v[1], p[2] * v[3], p[3] * v[2]]),
        Some((perm, phase)) => pass(buf, a, b, |v| {
            [phase[0] * v[perm[0]], phase[1] * v[perm[1]], phase[2] * v[perm[2]], phase[3] * v[perm[3]]]
        }),
        None => pass(buf, a, b, |v| {
            let row = |r: usize| m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
            [row(0), row(1), row(2), row(3)]
        }),
    };
    for (k, s) in sums.iter_mut().enumerate() {
        let f = damp.local(k);
        *s /= f * f;
    }
    sums
}

/// Runs `f` over every amplitude group of the pair `(a, b)` and returns the
/// squared weights of the outputs per local index.
#[inline(always)]
fn pass(buf: &mut [C], a: usize, b: usize, f: impl Fn([C; 4]) -> [C; 4]) -> [f64; 4] {
    let (lo, hi) = (a.min(b), a.max(b));
    let (slo, shi) = (1usize << lo, 1usize << hi);
    let (sa, sb) = (1usize << a, 1usize << b);
    let mut sums = [0.0; 4];
    let len = buf.len();
    let mut i0 = 0;
    while i0 < len {
        let mut i1 = i0;
        while i1 < i0 + shi {
            for base in i1..i1 + slo {
                let idx = [base, base | sb, base | sa, base | sa | sb];
                debug_assert!(idx[3] < len);
                // SAFETY: `base` has zero bits at `a` and `b` and is below
                // `len`, a power of two above both bits, so every index is
                // in bounds.
                unsafe {
                    let w = f(idx.map(|i| *buf.get_unchecked(i)));
                    for k in 0..4 {
                        sums[k] += w[k].norm_sqr();
                        *buf.get_unchecked_mut(idx[k]) = w[k];
                    }
                }
            }
            i1 += slo << 1;
        }
        i0 += shi << 1;
    }
    sums
}
