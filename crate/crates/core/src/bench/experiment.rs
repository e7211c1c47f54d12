// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::generators::{Family, GeneratorError};
use crate::compiler::{compile_pipeline, CompilationResult, CompileError, PipelineMode};
use crate::fidelity::{p2_heuristic, relaxation_times, CostModelParams, FidelityError, DEFAULT_ROUTING_OVERHEAD};
use crate::simulator::{
    circuit_duration, noisy_fidelity, simulate_ideal, FidelityEstimate, NoiseModel, SimError, DEFAULT_DUR_1Q,
    DEFAULT_DUR_2Q, MAX_DENSITY_QUBITS,
};
use crate::topology::{Topology, TopologyError, TopologySpec};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Fidelity(#[from] FidelityError),
    #[error(transparent)]
    Simulation(#[from] SimError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(xs) => xs.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AllDegrees {
    All,
}

/// Approximation degrees for the smallest-angle baseline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaselineDegrees {
    List(Vec<usize>),
    /// Every degree from 0 to the number of prunable gates.
    All(AllDegrees),
}

fn default_overhead() -> f64 {
    DEFAULT_ROUTING_OVERHEAD
}
fn default_shots() -> usize {
    20_000
}
fn default_seed() -> OneOrMany<u64> {
    OneOrMany::One(0)
}
fn default_layers() -> usize {
    1
}
fn default_dm_max() -> usize {
    MAX_DENSITY_QUBITS
}
fn default_true() -> bool {
    true
}
fn default_dur_1q() -> f64 {
    DEFAULT_DUR_1Q
}
fn default_dur_2q() -> f64 {
    DEFAULT_DUR_2Q
}

/// JSON experiment description.
///
/// ```
/// use qprune::bench::ExperimentConfig;
///
/// let cfg: ExperimentConfig = serde_json::from_str(
///     r#"{"family": ["qft", "ae"], "widths": [4, 6], "seeds": [1, 2], "baseline_ks": "all"}"#,
/// ).unwrap();
/// assert_eq!(cfg.families().len(), 2);
/// assert_eq!(cfg.seeds(), vec![1, 2]);
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: OneOrMany<Family>,
    pub widths: Vec<usize>,
    /// Hardware graph; defaults to the grid chosen for each width.
    #[serde(default)]
    pub topology: Option<TopologySpec>,
    /// Fixed depolarizing parameter; by default derived from the size of
    /// the compiled circuit.
    #[serde(default)]
    pub p2: Option<f64>,
    /// Switches thermal relaxation on or off.
    #[serde(default = "default_true")]
    pub relaxation: bool,
    #[serde(default = "default_overhead")]
    pub routing_overhead: f64,
    /// Trajectories per cell when the register is wider than `dm_max_qubits`.
    #[serde(default = "default_shots")]
    pub shots: usize,
    #[serde(default = "default_seed", alias = "seeds")]
    pub seed: OneOrMany<u64>,
    #[serde(default)]
    pub baseline_ks: Option<BaselineDegrees>,
    /// Ansatz depth for the QAOA families.
    #[serde(default = "default_layers")]
    pub layers: usize,
    #[serde(default = "default_dm_max")]
    pub dm_max_qubits: usize,
    #[serde(default = "default_dur_1q", rename = "dur_1q_s")]
    pub dur_1q: f64,
    #[serde(default = "default_dur_2q", rename = "dur_2q_s")]
    pub dur_2q: f64,
}

impl ExperimentConfig {
    pub fn new(families: Vec<Family>, widths: Vec<usize>) -> ExperimentConfig {
        ExperimentConfig {
            family: OneOrMany::Many(families),
            widths,
            topology: None,
            p2: None,
            relaxation: true,
            routing_overhead: DEFAULT_ROUTING_OVERHEAD,
            shots: default_shots(),
            seed: default_seed(),
            baseline_ks: None,
            layers: 1,
            dm_max_qubits: MAX_DENSITY_QUBITS,
            dur_1q: DEFAULT_DUR_1Q,
            dur_2q: DEFAULT_DUR_2Q,
        }
    }

    pub fn families(&self) -> Vec<Family> {
        self.family.to_vec()
    }

    pub fn seeds(&self) -> Vec<u64> {
        self.seed.to_vec()
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |msg: &str| Err(ExperimentError::Config(msg.to_string()));
        if self.families().is_empty() || self.widths.is_empty() || self.seeds().is_empty() {
            return bad("family, widths and seed must be non-empty");
        }
        if self.shots == 0 {
            return bad("shots must be at least 1");
        }
        if let Some(p2) = self.p2 {
            if !(0.0..1.0).contains(&p2) {
                return bad("p2 must lie in [0, 1)");
            }
        }
        if !(self.dur_1q >= 0.0 && self.dur_2q > 0.0) {
            return bad("gate durations must be positive");
        }
        Ok(())
    }
}

/// Which pipeline produced a report row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Noisy,
    Pruned,
    Baseline,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Noisy => "noisy",
            Mode::Pruned => "pruned",
            Mode::Baseline => "baseline",
        }
    }
}

/// One compiled and simulated pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub family: Family,
    pub width: usize,
    pub seed: u64,
    pub mode: Mode,
    /// Approximation degree, for baseline rows.
    pub k: Option<usize>,
    pub num_physical: usize,
    pub p2: f64,
    /// Relaxation times; absent when relaxation is off.
    pub t1_s: Option<f64>,
    pub t2_s: Option<f64>,
    pub cx: usize,
    pub gates_pruned: usize,
    pub swaps_inserted: usize,
    pub fidelity: f64,
    pub fidelity_stderr: f64,
    /// Trajectories behind `fidelity`; zero when it is exact.
    pub shots: usize,
    pub cx_noisy: usize,
    pub fid_noisy: f64,
    /// `100·(cx_noisy − cx)/cx_noisy`.
    pub rel_cx_reduction: f64,
    /// `100·(fidelity − fid_noisy)/fid_noisy`.
    pub rel_fid_improvement: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn find(&self, family: Family, width: usize, seed: u64, mode: Mode, k: Option<usize>) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.family == family && r.width == width && r.seed == seed && r.mode == mode && r.k == k)
    }
}

struct Cell {
    family: Family,
    width: usize,
    seed: u64,
}

fn percent_change(new: f64, old: f64) -> f64 {
    if old == 0.0 {
        0.0
    } else {
        100.0 * (new - old) / old
    }
}

fn run_cell(config: &ExperimentConfig, cell: &Cell) -> Result<Vec<ReportRow>, ExperimentError> {
    let circuit = cell.family.generate(cell.width, config.layers, cell.seed)?;
    let topology = match &config.topology {
        Some(spec) => spec.build()?,
        None => Topology::grid_for_width(cell.width)?,
    };
    let compile = |p2: f64, mode| -> Result<CompilationResult, ExperimentError> {
        let params = CostModelParams::new(p2, config.routing_overhead)?;
        Ok(compile_pipeline(&circuit, &topology, &params, mode)?)
    };

    // The noisy compilation fixes the noise for every pipeline of the cell.
    let noisy = compile(0.0, PipelineMode::Noisy)?;
    let p2 = match config.p2 {
        Some(p2) => p2,
        None => p2_heuristic(noisy.compiled.len(), noisy.compiled.num_qubits())?,
    };
    let durations = NoiseModel { p2, t1: f64::INFINITY, t2: f64::INFINITY, dur_1q: config.dur_1q, dur_2q: config.dur_2q };
    let noise = if config.relaxation {
        let (t1, t2) = relaxation_times(circuit_duration(&noisy.compiled, &durations))?;
        NoiseModel { t1, t2, ..durations }
    } else {
        durations
    }
    .validated()?;

    let mut runs: Vec<(Mode, Option<usize>, CompilationResult)> = vec![(Mode::Noisy, None, noisy)];
    runs.push((Mode::Pruned, None, compile(p2, PipelineMode::Pruned)?));
    let degrees = match &config.baseline_ks {
        None => vec![],
        Some(BaselineDegrees::List(ks)) => ks.clone(),
        Some(BaselineDegrees::All(_)) => (0..=circuit.count_prunable()).collect(),
    };
    for k in degrees {
        runs.push((Mode::Baseline, Some(k), compile(p2, PipelineMode::Baseline(k))?));
    }

    let ideal = simulate_ideal(&circuit)?;
    let mut rows = Vec::with_capacity(runs.len());
    for (mode, k, result) in runs {
        let est: FidelityEstimate = noisy_fidelity(
            &ideal,
            &result.compiled,
            &result.final_layout,
            &noise,
            config.dm_max_qubits,
            config.shots,
            cell.seed,
        )?;
        rows.push(ReportRow {
            family: cell.family,
            width: cell.width,
            seed: cell.seed,
            mode,
            k,
            num_physical: topology.num_physical(),
            p2,
            t1_s: noise.t1.is_finite().then_some(noise.t1),
            t2_s: noise.t2.is_finite().then_some(noise.t2),
            cx: result.compiled.count_gates(Some(crate::circuit::GateKind::Cx)),
            gates_pruned: result.pruned_gates.len(),
            swaps_inserted: result.swaps_inserted,
            fidelity: est.mean,
            fidelity_stderr: est.stderr,
            shots: est.shots,
            cx_noisy: 0,
            fid_noisy: 0.0,
            rel_cx_reduction: 0.0,
            rel_fid_improvement: 0.0,
        });
    }
    let (cx_noisy, fid_noisy) = (rows[0].cx, rows[0].fidelity);
    for row in &mut rows {
        row.cx_noisy = cx_noisy;
        row.fid_noisy = fid_noisy;
        row.rel_cx_reduction = -percent_change(row.cx as f64, cx_noisy as f64);
        row.rel_fid_improvement = percent_change(row.fidelity, fid_noisy);
    }
    Ok(rows)
}

/// Compiles and simulates every (family, width, seed) cell of `config`.
///
/// Each cell compiles the circuit without pruning first. Unless `p2` is
/// fixed in the config, that compiled circuit sets
/// `p2 = min((gates/qubits)^-2, 0.5)`, and its serial duration sets
/// `T1 = T2 = 2·duration`. The pruned and baseline pipelines of the cell are
/// then simulated with the same noise. Registers wider than `dm_max_qubits`
/// use `shots` trajectories seeded with the cell seed.
///
/// Rows come out ordered by family, width and seed, with the noisy row
/// first, then the pruned row, then the baselines. The output does not
/// depend on the number of worker threads.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    config.validate()?;
    let mut cells = Vec::new();
    for family in config.families() {
        for &width in &config.widths {
            for seed in config.seeds() {
                cells.push(Cell { family, width, seed });
            }
        }
    }
    // Exact simulations of seed-independent circuits are shared across seeds.
    let shared = |c: &Cell| -> bool {
        let physical = match &config.topology {
            Some(spec) => spec.build().map(|t| t.num_physical()).unwrap_or(usize::MAX),
            None => Topology::grid_for_width(c.width).map(|t| t.num_physical()).unwrap_or(c.width),
        };
        !c.family.is_seeded() && physical.max(c.width) <= config.dm_max_qubits.min(MAX_DENSITY_QUBITS)
    };
    let first_seed = config.seeds()[0];
    let work: Vec<&Cell> = cells.iter().filter(|c| !shared(c) || c.seed == first_seed).collect();
    let computed: Vec<Result<Vec<ReportRow>, ExperimentError>> =
        work.par_iter().map(|c| run_cell(config, c)).collect();
    let mut by_cell: BTreeMap<(Family, usize, u64), Vec<ReportRow>> = BTreeMap::new();
    for (c, rows) in work.iter().zip(computed) {
        by_cell.insert((c.family, c.width, c.seed), rows?);
    }

    let mut rows = Vec::new();
    for c in &cells {
        let key = if shared(c) { (c.family, c.width, first_seed) } else { (c.family, c.width, c.seed) };
        rows.extend(by_cell[&key].iter().cloned().map(|mut r| {
            r.seed = c.seed;
            r
        }));
    }
    Ok(ExperimentReport { rows })
}
