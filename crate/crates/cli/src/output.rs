//! CSV / JSON result files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rpod_core::campaign::{CampaignResult, ResultRow};

use crate::manifest::{OutputFormat, RunManifest};
use crate::CliError;

pub const CSV_HEADER: [&str; 8] = [
    "kind",
    "size_km",
    "impulse_count",
    "altitude_km",
    "total_dv_km_s",
    "insertion_dv_km_s",
    "max_miss_km",
    "duration_s",
];

/// 17 significant digits: enough to read every f64 back exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn record(row: &ResultRow) -> [String; 8] {
    [
        row.kind.as_str().to_string(),
        fmt_f64(row.size_km),
        row.impulse_count.to_string(),
        fmt_f64(row.altitude_km),
        fmt_f64(row.total_dv_km_s),
        fmt_f64(row.insertion_dv_km_s),
        fmt_f64(row.max_miss_km),
        fmt_f64(row.duration_s),
    ]
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(record(row))?;
    }
    w.flush().map_err(|e| CliError::io("<csv>", e))?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[ResultRow], mut out: W) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    out.write_all(b"\n").map_err(|e| CliError::io("<json>", e))?;
    Ok(())
}

/// Write one row per campaign to the manifest's output path.
pub fn emit_results(results: &[CampaignResult], manifest: &RunManifest) -> Result<usize, CliError> {
    if results.is_empty() {
        return Err(CliError::Runtime("no results to write".into()));
    }
    let path = manifest
        .output_path
        .as_deref()
        .ok_or_else(|| CliError::Runtime("manifest has no output path".into()))?;
    let rows: Vec<ResultRow> = results.iter().map(CampaignResult::row).collect();
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    match manifest.format {
        OutputFormat::Csv => write_csv(&rows, &mut out)?,
        OutputFormat::Json => write_json(&rows, &mut out)?,
    }
    out.flush().map_err(|e| CliError::io(path, e))?;
    Ok(rows.len())
}

/// Read a CSV written by [`write_csv`] back into typed rows.
pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>, CliError> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    if headers.iter().ne(CSV_HEADER) {
        return Err(CliError::Runtime(format!("unexpected CSV header in {}", path.display())));
    }
    let mut rows = Vec::new();
    for rec in r.deserialize() {
        rows.push(rec?);
    }
    Ok(rows)
}
