// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense gate application on amplitude buffers. Bit `q` of an index is the
//! state of qubit `q`.

use ndarray::Array2;
use num_complex::Complex64 as C;

pub type M2 = [[C; 2]; 2];
pub type M4 = [[C; 4]; 4];

pub const ZERO: C = C::new(0.0, 0.0);
pub const ONE: C = C::new(1.0, 0.0);

pub const I2: M2 = [[ONE, ZERO], [ZERO, ONE]];

pub fn to_m2(m: &Array2<C>) -> M2 {
    [[m[[0, 0]], m[[0, 1]]], [m[[1, 0]], m[[1, 1]]]]
}

pub fn to_m4(m: &Array2<C>) -> M4 {
    let mut out = [[ZERO; 4]; 4];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = m[[r, c]];
        }
    }
    out
}

pub fn mul2(a: &M2, b: &M2) -> M2 {
    let mut out = [[ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

pub fn mul4(a: &M4, b: &M4) -> M4 {
    let mut out = [[ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = (0..4).map(|k| a[r][k] * b[k][c]).sum();
        }
    }
    out
}

/// `hi ⊗ lo` in the two-qubit local ordering (index `2·bit_hi + bit_lo`).
pub fn kron2(hi: &M2, lo: &M2) -> M4 {
    let mut out = [[ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = hi[r >> 1][c >> 1] * lo[r & 1][c & 1];
        }
    }
    out
}

pub fn dagger2(m: &M2) -> M2 {
    [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
}

pub fn conj4(m: &M4) -> M4 {
    m.map(|row| row.map(|z| z.conj()))
}

pub fn conj2(m: &M2) -> M2 {
    m.map(|row| row.map(|z| z.conj()))
}

pub const CX: M4 = [
    [ONE, ZERO, ZERO, ZERO],
    [ZERO, ONE, ZERO, ZERO],
    [ZERO, ZERO, ZERO, ONE],
    [ZERO, ZERO, ONE, ZERO],
];

pub fn is_identity2(m: &M2) -> bool {
    *m == I2
}

/// Applies `m` to qubit `bit`.
pub fn apply_1q(amps: &mut [C], bit: usize, m: &M2) {
    let stride = 1usize << bit;
    for block in amps.chunks_exact_mut(stride << 1) {
        let (lo, hi) = block.split_at_mut(stride);
        for (x0, x1) in lo.iter_mut().zip(hi.iter_mut()) {
            let (a, b) = (*x0, *x1);
            *x0 = m[0][0] * a + m[0][1] * b;
            *x1 = m[1][0] * a + m[1][1] * b;
        }
    }
}

/// Spreads `i` so that bit positions `lo < hi` are zero.
#[inline]
pub fn insert_two_zero_bits(i: usize, lo: usize, hi: usize) -> usize {
    let low_mask = (1usize << lo) - 1;
    let i = ((i & !low_mask) << 1) | (i & low_mask);
    let high_mask = (1usize << hi) - 1;
    ((i & !high_mask) << 1) | (i & high_mask)
}

/// Applies `m` to the qubit pair `(q0, q1)`; `q0` is the high local bit.
pub fn apply_2q(amps: &mut [C], q0: usize, q1: usize, m: &M4) {
    let (lo, hi) = (q0.min(q1), q0.max(q1));
    let (s0, s1) = (1usize << q0, 1usize << q1);
    for g in 0..amps.len() >> 2 {
        let base = insert_two_zero_bits(g, lo, hi);
        let idx = [base, base | s1, base | s0, base | s0 | s1];
        let v = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for (r, &i) in idx.iter().enumerate() {
            amps[i] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
        }
    }
}

/// Index positions of a qubit pair group, in local order.
#[inline]
pub fn group_indices(g: usize, q0: usize, q1: usize) -> [usize; 4] {
    let base = insert_two_zero_bits(g, q0.min(q1), q0.max(q1));
    let (s0, s1) = (1usize << q0, 1usize << q1);
    [base, base | s1, base | s0, base | s0 | s1]
}

/// Single-qubit Pauli matrices indexed 0..4 as I, X, Y, Z.
pub fn pauli(k: usize) -> M2 {
    let i = C::new(0.0, 1.0);
    match k {
        0 => I2,
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, -i], [i, ZERO]],
        3 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => unreachable!("pauli index {k}"),
    }
}
