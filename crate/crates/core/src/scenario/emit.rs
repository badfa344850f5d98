//! Writes grids and JSON documents once all compute has finished.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::dominance::DominanceReport;
use crate::error::{Error, Result};
use crate::grid::CorrelationGrid;

pub fn grid_file_name(scenario: &str, label: &str) -> String {
    format!("{scenario}__{label}.csv")
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf> {
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialise");
    s.push('\n');
    s
}

/// One CSV per grid plus `report.json` (when present) and `summary.json`.
/// Returns the written paths in order.
pub fn emit_outputs(
    scenario: &str,
    grids: &[CorrelationGrid],
    report: Option<&DominanceReport>,
    summary: &serde_json::Value,
    directory: &Path,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(directory).map_err(|e| Error::io(directory, e))?;
    let mut written = Vec::new();
    for grid in grids {
        let path = directory.join(grid_file_name(scenario, &grid.label));
        written.push(write(path, &grid.to_csv())?);
    }
    if let Some(report) = report {
        written.push(write(directory.join("report.json"), &to_json(report))?);
    }
    written.push(write(directory.join("summary.json"), &to_json(summary))?);
    Ok(written)
}
