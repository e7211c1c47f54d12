// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qprune::bench::{emit_report, run_experiment, ExperimentConfig, Family, ReportFormat};
use qprune::circuit::{emit_qasm, parse_qasm, Circuit, GateKind};
use qprune::compiler::{compile_pipeline, decompose_to_basis, CompilationResult, Layout, PipelineMode, PrunedGate};
use qprune::fidelity::{p2_heuristic, CostModelParams, DEFAULT_ROUTING_OVERHEAD};
use qprune::simulator::{noisy_fidelity, simulate_ideal, NoiseModel, MAX_DENSITY_QUBITS};
use qprune::topology::Topology;

#[derive(Parser)]
#[command(name = "qprune", version, about = "Routing-aware pruning of parametric two-qubit gates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a benchmark circuit as OpenQASM 2.
    Generate(GenerateArgs),
    /// Route a circuit onto a topology and lower it to CX/ID/RZ/SX/X.
    Compile(CompileArgs),
    /// Noisy fidelity of a circuit against its ideal output.
    Simulate(SimulateArgs),
    /// Run an experiment config and write a CSV or JSON report.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// qft, qft_entangled, amplitude_estimation (ae), qaoa, portfolio_qaoa, random_parametric
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    layers: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CompileArgs {
    /// `grid:RxC`; defaults to the grid chosen for the circuit width.
    #[arg(long)]
    topology: Option<String>,
    /// Enable routing-aware pruning.
    #[arg(long, conflicts_with = "baseline_k")]
    prune: bool,
    /// Drop the k smallest-angle parametric gates before routing.
    #[arg(long)]
    baseline_k: Option<usize>,
    /// Depolarizing parameter for the pruning rule; derived from the
    /// unpruned compilation when omitted.
    #[arg(long)]
    p2: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_ROUTING_OVERHEAD)]
    routing_overhead: f64,
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Write compilation statistics (including the final layout) as JSON.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// JSON with p2, t1_s, t2_s and optionally dur_1q_s, dur_2q_s.
    #[arg(long)]
    noise: PathBuf,
    #[arg(long, default_value_t = 20_000)]
    shots: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Widest register simulated exactly; wider ones use trajectories.
    #[arg(long, default_value_t = MAX_DENSITY_QUBITS)]
    dm_max_qubits: usize,
    /// Circuit to simulate; non-basis gates are decomposed first.
    #[arg(short, long)]
    input: PathBuf,
    /// Logical circuit giving the ideal state; defaults to the input.
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Stats file from `compile`, whose final layout maps the reference
    /// onto the input's qubits.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// csv or json; inferred from the output extension by default.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Serialize, serde::Deserialize)]
struct CompileStats {
    topology: String,
    num_physical: usize,
    mode: String,
    p2: f64,
    routing_overhead: f64,
    gates_in: usize,
    gates_out: usize,
    cx_count: usize,
    swaps_inserted: usize,
    gates_pruned: usize,
    pruned_gates: Vec<PrunedGate>,
    final_layout: Vec<usize>,
}

fn read_circuit(path: &Path) -> Result<Circuit> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_qasm(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn generate(args: GenerateArgs) -> Result<()> {
    let Some(family) = Family::parse(&args.family) else {
        bail!("unknown family {:?}", args.family);
    };
    let circuit = family.generate(args.n, args.layers, args.seed)?;
    write_text(args.output.as_deref(), &emit_qasm(&circuit))
}

fn compile(args: CompileArgs) -> Result<()> {
    let circuit = read_circuit(&args.input)?;
    let topology = match &args.topology {
        Some(spec) => Topology::from_spec(spec)?,
        None => Topology::grid_for_width(circuit.num_qubits())?,
    };
    let p2 = match args.p2 {
        Some(p2) => p2,
        None => {
            let params = CostModelParams::new(0.0, args.routing_overhead)?;
            let full = compile_pipeline(&circuit, &topology, &params, PipelineMode::Noisy)?;
            p2_heuristic(full.compiled.len(), full.compiled.num_qubits())?
        }
    };
    let params = CostModelParams::new(p2, args.routing_overhead)?;
    let mode = match (args.prune, args.baseline_k) {
        (true, _) => PipelineMode::Pruned,
        (false, Some(k)) => PipelineMode::Baseline(k),
        (false, None) => PipelineMode::Noisy,
    };
    let result: CompilationResult = compile_pipeline(&circuit, &topology, &params, mode)?;
    write_text(args.output.as_deref(), &emit_qasm(&result.compiled))?;
    if let Some(path) = &args.stats {
        let stats = CompileStats {
            topology: match topology.grid_shape() {
                Some((r, c)) => format!("grid:{r}x{c}"),
                None => format!("edges:{}", topology.edges().len()),
            },
            num_physical: topology.num_physical(),
            mode: match mode {
                PipelineMode::Noisy => "noisy".into(),
                PipelineMode::Pruned => "pruned".into(),
                PipelineMode::Baseline(k) => format!("baseline:{k}"),
            },
            p2,
            routing_overhead: args.routing_overhead,
            gates_in: circuit.len(),
            gates_out: result.compiled.len(),
            cx_count: result.compiled.count_gates(Some(GateKind::Cx)),
            swaps_inserted: result.swaps_inserted,
            gates_pruned: result.pruned_gates.len(),
            pruned_gates: result.pruned_gates.clone(),
            final_layout: result.final_layout.log_to_phys().to_vec(),
        };
        fs::write(path, serde_json::to_string_pretty(&stats)? + "\n")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SimulateOutput {
    fidelity: f64,
    stderr: f64,
    shots: usize,
    engine: &'static str,
    num_qubits: usize,
    cx_count: usize,
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let noise: NoiseModel = serde_json::from_str(&fs::read_to_string(&args.noise)?)
        .with_context(|| format!("parsing {}", args.noise.display()))?;
    let noise = noise.validated()?;
    let input = read_circuit(&args.input)?;
    let compiled = if input.is_basis_only() { input.clone() } else { decompose_to_basis(&input) };
    let reference = match &args.reference {
        Some(p) => read_circuit(p)?,
        None => input,
    };
    let layout = match &args.stats {
        Some(p) => {
            let stats: CompileStats = serde_json::from_str(&fs::read_to_string(p)?)?;
            Layout::from_log_to_phys(stats.final_layout).context("stats file has an invalid layout")?
        }
        None => Layout::identity(compiled.num_qubits()),
    };
    let ideal = simulate_ideal(&reference)?;
    let est = noisy_fidelity(&ideal, &compiled, &layout, &noise, args.dm_max_qubits, args.shots, args.seed)?;
    let out = SimulateOutput {
        fidelity: est.mean,
        stderr: est.stderr,
        shots: est.shots,
        engine: if est.shots > 0 { "trajectory" } else { "density_matrix" },
        num_qubits: compiled.num_qubits(),
        cx_count: compiled.count_gates(Some(GateKind::Cx)),
    };
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn bench(args: BenchArgs) -> Result<()> {
    let text = fs::read_to_string(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let config: ExperimentConfig =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", args.config.display()))?;
    let format = match args.format.as_deref() {
        None => ReportFormat::from_path(&args.output),
        Some("csv") => ReportFormat::Csv,
        Some("json") => ReportFormat::Json,
        Some(other) => bail!("unknown report format {other:?}"),
    };
    let report = run_experiment(&config)?;
    emit_report(&report, format, &args.output)?;
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate(a) => generate(a),
        Command::Compile(a) => compile(a),
        Command::Simulate(a) => simulate(a),
        Command::Bench(a) => bench(a),
    }
}
