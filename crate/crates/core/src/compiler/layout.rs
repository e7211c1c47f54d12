// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

/// Bijection between virtual qubits and physical qubits.
///
/// Both sides have `num_physical` entries. Virtual qubits at or above the
/// circuit width are idle ancillas that start in `|0⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    log_to_phys: Vec<usize>,
    phys_to_log: Vec<usize>,
}

impl Layout {
    pub fn identity(n: usize) -> Layout {
        Layout { log_to_phys: (0..n).collect(), phys_to_log: (0..n).collect() }
    }

    /// Builds a layout from its logical→physical map; `None` unless the map is
    /// a permutation of `0..len`.
    pub fn from_log_to_phys(log_to_phys: Vec<usize>) -> Option<Layout> {
        let n = log_to_phys.len();
        let mut phys_to_log = vec![usize::MAX; n];
        for (l, &p) in log_to_phys.iter().enumerate() {
            if p >= n || phys_to_log[p] != usize::MAX {
                return None;
            }
            phys_to_log[p] = l;
        }
        Some(Layout { log_to_phys, phys_to_log })
    }

    pub fn len(&self) -> usize {
        self.log_to_phys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_to_phys.is_empty()
    }

    pub fn physical(&self, logical: usize) -> usize {
        self.log_to_phys[logical]
    }

    pub fn logical(&self, physical: usize) -> usize {
        self.phys_to_log[physical]
    }

    pub fn log_to_phys(&self) -> &[usize] {
        &self.log_to_phys
    }

    pub fn phys_to_log(&self) -> &[usize] {
        &self.phys_to_log
    }

    /// Records a SWAP on physical qubits `a` and `b`.
    pub fn swap_physical(&mut self, a: usize, b: usize) {
        let (la, lb) = (self.phys_to_log[a], self.phys_to_log[b]);
        self.phys_to_log.swap(a, b);
        self.log_to_phys[la] = b;
        self.log_to_phys[lb] = a;
        assert!(self.is_consistent(), "layout is no longer a bijection");
    }

    pub fn is_consistent(&self) -> bool {
        self.log_to_phys.len() == self.phys_to_log.len()
            && self.log_to_phys.iter().enumerate().all(|(l, &p)| self.phys_to_log.get(p) == Some(&l))
    }
}
