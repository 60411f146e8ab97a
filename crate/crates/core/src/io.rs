//! Flat-file codecs: spike-train CSV, sample-time CSV, experiment config JSON
//! and experiment result tables.
//!
//! Numbers are written with Rust's shortest round-trip `Display`, except the
//! summary table which is rounded to 12 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiments::{CellSummary, ExperimentConfig, TrialRecord};
use crate::spike::{Spike, SpikeTrain};

pub const TRAIN_HEADER: &str = "time,amplitude";
pub const TRACE_HEADER: &str = "time,potential";
pub const RESULTS_HEADER: &str = "mode,alpha,n,run,error_norm";
pub const STATS_HEADER: &str =
    "mode,alpha,n,n_samples,mean,max,violations,median,q1,q3,whisker_low,whisker_high,outliers";

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn csv_error(path: &Path, row: usize, message: impl Into<String>) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        row,
        message: message.into(),
    }
}

fn parse_cell(path: &Path, row: usize, cell: &str, what: &str) -> Result<f64> {
    let v: f64 = cell.trim().parse().map_err(|_| {
        csv_error(
            path,
            row,
            format!("{what} '{}' is not a number", cell.trim()),
        )
    })?;
    if !v.is_finite() {
        return Err(csv_error(path, row, format!("{what} must be finite")));
    }
    Ok(v)
}

/// Data rows of a CSV file, numbered from 2 (the header is row 1). Blank
/// lines are skipped.
fn data_rows<'a>(
    path: &'a Path,
    text: &'a str,
    header: &str,
) -> Result<impl Iterator<Item = (usize, &'a str)> + 'a> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, first)) if first.trim().trim_start_matches('\u{feff}') == header => {}
        _ => return Err(csv_error(path, 1, format!("expected header '{header}'"))),
    }
    Ok(lines.filter(|(_, l)| !l.trim().is_empty()))
}

pub fn parse_train_csv(path: &Path, text: &str) -> Result<SpikeTrain> {
    let mut events = Vec::new();
    for (row, line) in data_rows(path, text, TRAIN_HEADER)? {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 2 {
            return Err(csv_error(
                path,
                row,
                format!("expected 2 columns, found {}", cells.len()),
            ));
        }
        let time = parse_cell(path, row, cells[0], "time")?;
        let amplitude = parse_cell(path, row, cells[1], "amplitude")?;
        events.push(Spike::new(time, amplitude));
    }
    SpikeTrain::from_events(events)
}

pub fn read_train_csv(path: &Path) -> Result<SpikeTrain> {
    parse_train_csv(path, &read_to_string(path)?)
}

pub fn format_train_csv(train: &SpikeTrain) -> String {
    let mut out = String::with_capacity(16 + 24 * train.len());
    out.push_str(TRAIN_HEADER);
    out.push('\n');
    for s in train {
        let _ = writeln!(out, "{},{}", s.time, s.amplitude);
    }
    out
}

pub fn write_train_csv(train: &SpikeTrain, path: &Path) -> Result<()> {
    fs::write(path, format_train_csv(train)).map_err(|e| Error::io(path, e))
}

/// Reads sample times: header `time`, one value per row.
pub fn read_times_csv(path: &Path) -> Result<Vec<f64>> {
    let text = read_to_string(path)?;
    let times = data_rows(path, &text, "time")?
        .map(|(row, line)| parse_cell(path, row, line, "time"))
        .collect();
    times
}

pub fn format_trace_csv(trace: &[(f64, f64)]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for (t, u) in trace {
        let _ = writeln!(out, "{t},{u}");
    }
    out
}

pub fn read_experiment_config(path: &Path) -> Result<ExperimentConfig> {
    let text = read_to_string(path)?;
    let config: ExperimentConfig = serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    config.validate()?;
    Ok(config)
}

/// Rounds to 12 significant digits and prints the shortest form of the result.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("valid float");
    format!("{rounded}")
}

pub fn write_results_csv<W: Write>(mut w: W, rows: &[TrialRecord]) -> std::io::Result<()> {
    writeln!(w, "{RESULTS_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.mode, r.alpha, r.n, r.run, r.error_norm
        )?;
    }
    w.flush()
}

pub fn write_stats_csv<W: Write>(mut w: W, cells: &[CellSummary]) -> std::io::Result<()> {
    writeln!(w, "{STATS_HEADER}")?;
    for c in cells {
        let s = &c.stats;
        let outliers: Vec<String> = s.outliers.iter().map(|&x| sig12(x)).collect();
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            c.mode,
            c.alpha,
            c.n,
            s.n_samples,
            sig12(c.mean),
            sig12(c.max),
            c.violations,
            sig12(s.median),
            sig12(s.q1),
            sig12(s.q3),
            sig12(s.whisker_low),
            sig12(s.whisker_high),
            outliers.join(";"),
        )?;
    }
    w.flush()
}
