// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

//! Coupling graphs of physical qubits.
//!
//! All-pairs distances are computed once, at construction, by one
//! breadth-first search per node; every later distance query is a table
//! lookup.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TopologyError {
    #[error("grid dimensions must be positive with at least two nodes, got {rows}x{cols}")]
    BadGrid { rows: usize, cols: usize },
    #[error("a topology needs at least two qubits, got {0}")]
    TooSmall(usize),
    #[error("edge ({0}, {1}) is out of range or a self-loop")]
    BadEdge(usize, usize),
    #[error("coupling graph is not connected")]
    Disconnected,
    #[error("swap distance is undefined between a qubit and itself ({0})")]
    SameQubit(usize),
    #[error("unknown topology spec `{0}`; expected grid:RxC")]
    BadSpec(String),
}

/// Undirected coupling graph with precomputed shortest-path lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    num_physical: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    dist: Vec<u32>,
    grid: Option<(usize, usize)>,
}

impl Topology {
    /// Builds a topology from an edge list. Duplicate edges are merged.
    pub fn from_edges(num_physical: usize, edges: &[(usize, usize)]) -> Result<Topology, TopologyError> {
        if num_physical < 2 {
            return Err(TopologyError::TooSmall(num_physical));
        }
        let mut neighbors = vec![Vec::new(); num_physical];
        let mut canon = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b || a >= num_physical || b >= num_physical {
                return Err(TopologyError::BadEdge(a, b));
            }
            let e = (a.min(b), a.max(b));
            if !canon.contains(&e) {
                canon.push(e);
                neighbors[a].push(b);
                neighbors[b].push(a);
            }
        }
        canon.sort_unstable();
        for n in &mut neighbors {
            n.sort_unstable();
        }

        let mut dist = vec![u32::MAX; num_physical * num_physical];
        let mut queue = VecDeque::new();
        for src in 0..num_physical {
            let row = &mut dist[src * num_physical..(src + 1) * num_physical];
            row[src] = 0;
            queue.push_back(src);
            while let Some(u) = queue.pop_front() {
                for &v in &neighbors[u] {
                    if row[v] == u32::MAX {
                        row[v] = row[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            if row.contains(&u32::MAX) {
                return Err(TopologyError::Disconnected);
            }
        }
        Ok(Topology { num_physical, edges: canon, neighbors, dist, grid: None })
    }

    /// Rectangular nearest-neighbour lattice; node `(r, c)` has index `r·cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Result<Topology, TopologyError> {
        if rows == 0 || cols == 0 || rows * cols < 2 {
            return Err(TopologyError::BadGrid { rows, cols });
        }
        let mut edges = Vec::with_capacity(rows * (cols - 1) + cols * (rows - 1));
        for r in 0..rows {
            for c in 0..cols {
                let i = r * cols + c;
                if c + 1 < cols {
                    edges.push((i, i + 1));
                }
                if r + 1 < rows {
                    edges.push((i, i + cols));
                }
            }
        }
        let mut t = Topology::from_edges(rows * cols, &edges)?;
        t.grid = Some((rows, cols));
        Ok(t)
    }

    /// Default grid for an `n`-qubit circuit: the most square `r×c` grid with
    /// exactly `n` nodes and `r ≥ 2`, or, when no such factorization exists,
    /// the smallest such grid with more than `n` nodes. For 4, 6, 8, 10, 12
    /// and 14 qubits this gives 2×2, 2×3, 2×4, 2×5, 3×4 and 2×7.
    pub fn grid_for_width(n: usize) -> Result<Topology, TopologyError> {
        let (rows, cols) = grid_shape_for_width(n)?;
        Topology::grid(rows, cols)
    }

    /// Parses `grid:RxC`.
    pub fn from_spec(spec: &str) -> Result<Topology, TopologyError> {
        let bad = || TopologyError::BadSpec(spec.to_string());
        let dims = spec.strip_prefix("grid:").ok_or_else(bad)?;
        let (r, c) = dims.split_once(['x', 'X']).ok_or_else(bad)?;
        let rows = r.trim().parse().map_err(|_| bad())?;
        let cols = c.trim().parse().map_err(|_| bad())?;
        Topology::grid(rows, cols)
    }

    pub fn num_physical(&self) -> usize {
        self.num_physical
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbours of `p` in ascending index order.
    pub fn neighbors(&self, p: usize) -> &[usize] {
        &self.neighbors[p]
    }

    /// `(rows, cols)` when built as a grid.
    pub fn grid_shape(&self) -> Option<(usize, usize)> {
        self.grid
    }

    /// Shortest-path length in edges.
    pub fn distance(&self, p: usize, q: usize) -> usize {
        self.dist[p * self.num_physical + q] as usize
    }

    pub fn are_adjacent(&self, p: usize, q: usize) -> bool {
        self.distance(p, q) == 1
    }

    /// SWAPs needed to make `p` and `q` adjacent: shortest-path length minus one.
    pub fn swap_distance(&self, p: usize, q: usize) -> Result<usize, TopologyError> {
        if p == q {
            return Err(TopologyError::SameQubit(p));
        }
        Ok(self.distance(p, q) - 1)
    }

    pub fn diameter(&self) -> usize {
        self.dist.iter().copied().max().unwrap_or(0) as usize
    }

    /// A shortest path from `p` to `q`, both ends included. Ties are broken
    /// by always stepping to the lowest-index neighbour that is one edge
    /// closer to `q`.
    pub fn shortest_path(&self, p: usize, q: usize) -> Vec<usize> {
        let mut path = vec![p];
        let mut cur = p;
        while cur != q {
            let want = self.distance(cur, q) - 1;
            cur = *self.neighbors[cur]
                .iter()
                .find(|&&n| self.distance(n, q) == want)
                .expect("connected graph has a closer neighbour");
            path.push(cur);
        }
        path
    }
}

fn grid_shape_for_width(n: usize) -> Result<(usize, usize), TopologyError> {
    if n < 2 {
        return Err(TopologyError::TooSmall(n));
    }
    if n <= 3 {
        return Ok(if n == 2 { (1, 2) } else { (2, 2) });
    }
    let mut size = n;
    loop {
        // Largest r ≤ √size dividing size gives the most square shape.
        let best = (2..=size).take_while(|r| r * r <= size).filter(|r| size % r == 0).last();
        if let Some(r) = best {
            return Ok((r, size / r));
        }
        size += 1;
    }
}

/// Topology description accepted in experiment configuration files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopologySpec {
    Grid([usize; 2]),
    Edges { num_physical: usize, edges: Vec<(usize, usize)> },
}

impl TopologySpec {
    pub fn build(&self) -> Result<Topology, TopologyError> {
        match self {
            TopologySpec::Grid([r, c]) => Topology::grid(*r, *c),
            TopologySpec::Edges { num_physical, edges } => Topology::from_edges(*num_physical, edges),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts() {
        let t = Topology::grid(2, 2).unwrap();
        assert_eq!((t.num_physical(), t.edges().len()), (4, 4));
        let t = Topology::grid(3, 4).unwrap();
        assert_eq!((t.num_physical(), t.edges().len()), (12, 17));
    }

    #[test]
    fn ten_and_twelve_share_diameter() {
        assert_eq!(Topology::grid(2, 5).unwrap().diameter(), 5);
        assert_eq!(Topology::grid(3, 4).unwrap().diameter(), 5);
    }

    #[test]
    fn swap_distances() {
        let t = Topology::grid(2, 2).unwrap();
        assert_eq!(t.swap_distance(0, 1).unwrap(), 0);
        assert_eq!(t.swap_distance(0, 3).unwrap(), 1);
        let t = Topology::grid(3, 4).unwrap();
        assert_eq!(t.swap_distance(0, 11).unwrap(), 4);
        assert_eq!(t.swap_distance(5, 5), Err(TopologyError::SameQubit(5)));
    }

    #[test]
    fn width_table() {
        for (n, shape) in [(4, (2, 2)), (6, (2, 3)), (8, (2, 4)), (10, (2, 5)), (12, (3, 4)), (14, (2, 7))] {
            assert_eq!(Topology::grid_for_width(n).unwrap().grid_shape(), Some(shape), "n = {n}");
        }
        assert_eq!(grid_shape_for_width(2).unwrap(), (1, 2));
        assert_eq!(grid_shape_for_width(3).unwrap(), (2, 2));
        assert_eq!(grid_shape_for_width(5).unwrap(), (2, 3));
        assert_eq!(grid_shape_for_width(7).unwrap(), (2, 4));
        assert_eq!(grid_shape_for_width(9).unwrap(), (3, 3));
        assert_eq!(grid_shape_for_width(13).unwrap(), (2, 7));
        assert_eq!(grid_shape_for_width(16).unwrap(), (4, 4));
        assert!(Topology::grid_for_width(1).is_err());
    }

    #[test]
    fn grid_errors() {
        assert!(Topology::grid(0, 3).is_err());
        assert!(Topology::grid(1, 1).is_err());
        assert_eq!(Topology::from_edges(3, &[(0, 1)]), Err(TopologyError::Disconnected));
        assert_eq!(Topology::from_edges(3, &[(0, 3)]), Err(TopologyError::BadEdge(0, 3)));
    }

    #[test]
    fn manhattan_exhaustive() {
        for rows in 1..=4 {
            for cols in 1..=4 {
                let Ok(t) = Topology::grid(rows, cols) else { continue };
                for p in 0..rows * cols {
                    for q in 0..rows * cols {
                        let (pr, pc) = (p / cols, p % cols);
                        let (qr, qc) = (q / cols, q % cols);
                        assert_eq!(t.distance(p, q), pr.abs_diff(qr) + pc.abs_diff(qc));
                        assert_eq!(t.distance(p, q), t.distance(q, p));
                        for k in 0..rows * cols {
                            assert!(t.distance(p, q) <= t.distance(p, k) + t.distance(k, q));
                        }
                    }
                    let deg = t.neighbors(p).len();
                    if rows >= 2 && cols >= 2 {
                        assert!((2..=4).contains(&deg));
                    }
                }
            }
        }
    }

    #[test]
    fn shortest_path_is_shortest_and_deterministic() {
        let t = Topology::grid(3, 4).unwrap();
        let path = t.shortest_path(0, 11);
        assert_eq!(path.len(), 6);
        assert_eq!(path, vec![0, 1, 2, 3, 7, 11]);
        for w in path.windows(2) {
            assert!(t.are_adjacent(w[0], w[1]));
        }
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(Topology::from_spec("grid:2x4").unwrap().grid_shape(), Some((2, 4)));
        assert!(Topology::from_spec("ring:4").is_err());
        let spec: TopologySpec = serde_json::from_str(r#"{"grid": [3, 4]}"#).unwrap();
        assert_eq!(spec.build().unwrap().num_physical(), 12);
    }
}
