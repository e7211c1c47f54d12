// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

//! Benchmark circuits and the noisy / pruned / baseline comparison.

mod experiment;
mod generators;
mod report;

pub use experiment::{
    run_experiment, AllDegrees, BaselineDegrees, ExperimentConfig, ExperimentError, ExperimentReport, Mode, OneOrMany,
    ReportRow,
};
pub use generators::{
    amplitude_estimation_theta, gen_amplitude_estimation, gen_qaoa, gen_qft, gen_random_parametric, Family,
    GeneratorError,
};
pub use report::{emit_report, format_sig6, write_report, ReportError, ReportFormat, CSV_COLUMNS};
