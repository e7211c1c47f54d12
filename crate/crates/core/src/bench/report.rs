// Copyright 2026 The qprune Authors
// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::experiment::{ExperimentReport, ReportRow};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("report has no rows")]
    Empty,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    /// `.json` files get JSON, everything else CSV.
    pub fn from_path(path: &Path) -> ReportFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => ReportFormat::Json,
            _ => ReportFormat::Csv,
        }
    }
}

pub const CSV_COLUMNS: [&str; 20] = [
    "family",
    "width",
    "seed",
    "mode",
    "k",
    "num_physical",
    "p2",
    "t1_s",
    "t2_s",
    "cx",
    "gates_pruned",
    "swaps_inserted",
    "fidelity",
    "fidelity_stderr",
    "shots",
    "cx_noisy",
    "fid_noisy",
    "rel_cx_reduction",
    "rel_fid_improvement",
    "engine",
];

/// Formats `x` with six significant digits, like C's `%.6g`.
///
/// ```
/// use qprune::bench::format_sig6;
///
/// assert_eq!(format_sig6(0.99250000001), "0.9925");
/// assert_eq!(format_sig6(1234567.0), "1.23457e6");
/// assert_eq!(format_sig6(-0.000012345678), "-1.23457e-5");
/// assert_eq!(format_sig6(0.0), "0");
/// ```
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_record(row: &ReportRow) -> Vec<String> {
    let opt = |x: Option<f64>| x.map(format_sig6).unwrap_or_default();
    vec![
        row.family.name().to_string(),
        row.width.to_string(),
        row.seed.to_string(),
        row.mode.name().to_string(),
        row.k.map(|k| k.to_string()).unwrap_or_default(),
        row.num_physical.to_string(),
        format_sig6(row.p2),
        opt(row.t1_s),
        opt(row.t2_s),
        row.cx.to_string(),
        row.gates_pruned.to_string(),
        row.swaps_inserted.to_string(),
        format_sig6(row.fidelity),
        format_sig6(row.fidelity_stderr),
        row.shots.to_string(),
        row.cx_noisy.to_string(),
        format_sig6(row.fid_noisy),
        format_sig6(row.rel_cx_reduction),
        format_sig6(row.rel_fid_improvement),
        if row.shots > 0 { "trajectory" } else { "density_matrix" }.to_string(),
    ]
}

/// Writes the report as CSV (one line per row, columns [`CSV_COLUMNS`],
/// floats with six significant digits) or as JSON (full precision).
pub fn write_report(report: &ExperimentReport, format: ReportFormat, out: impl Write) -> Result<(), ReportError> {
    if report.rows.is_empty() {
        return Err(ReportError::Empty);
    }
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_COLUMNS)?;
            for row in &report.rows {
                w.write_record(csv_record(row))?;
            }
            w.flush()?;
        }
        ReportFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, report)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// [`write_report`] into a file.
pub fn emit_report(report: &ExperimentReport, format: ReportFormat, path: &Path) -> Result<(), ReportError> {
    if report.rows.is_empty() {
        return Err(ReportError::Empty);
    }
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_report(report, format, file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{Family, Mode};

    fn row() -> ReportRow {
        ReportRow {
            family: Family::Qft,
            width: 4,
            seed: 7,
            mode: Mode::Pruned,
            k: None,
            num_physical: 4,
            p2: 0.0123456789,
            t1_s: Some(2.5e-5),
            t2_s: Some(2.5e-5),
            cx: 20,
            gates_pruned: 1,
            swaps_inserted: 2,
            fidelity: 0.8,
            fidelity_stderr: 0.0,
            shots: 0,
            cx_noisy: 24,
            fid_noisy: 0.75,
            rel_cx_reduction: 100.0 / 6.0,
            rel_fid_improvement: 6.666666666,
        }
    }

    #[test]
    fn csv_has_header_and_one_line() {
        let report = ExperimentReport { rows: vec![row()] };
        let mut buf = Vec::new();
        write_report(&report, ReportFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].contains("gates_pruned") && lines[0].contains("swaps_inserted"));
        assert_eq!(lines[1], "qft,4,7,pruned,,4,0.0123457,2.5e-5,2.5e-5,20,1,2,0.8,0,0,24,0.75,16.6667,6.66667,density_matrix");
    }

    #[test]
    fn json_round_trips() {
        let report = ExperimentReport { rows: vec![row(), ReportRow { k: Some(3), t1_s: None, ..row() }] };
        let mut buf = Vec::new();
        write_report(&report, ReportFormat::Json, &mut buf).unwrap();
        let back: ExperimentReport = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn empty_report_is_rejected() {
        let empty = ExperimentReport { rows: vec![] };
        assert!(matches!(write_report(&empty, ReportFormat::Csv, Vec::new()), Err(ReportError::Empty)));
    }

    #[test]
    fn sig6() {
        assert_eq!(format_sig6(100000.0), "100000");
        assert_eq!(format_sig6(999999.5), "1e6");
        assert_eq!(format_sig6(0.0001), "0.0001");
        assert_eq!(format_sig6(1e-5), "1e-5");
        assert_eq!(format_sig6(-48.6), "-48.6");
    }
}
