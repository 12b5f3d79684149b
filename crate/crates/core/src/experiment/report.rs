//! Reading artifacts back and printing the run summary.

use std::fs;
use std::path::Path;

use super::{io_err, ExperimentError};

pub fn read_summary(out_dir: &Path) -> Result<serde_json::Value, ExperimentError> {
    let path = out_dir.join("summary.json");
    let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
    serde_json::from_str(&text).map_err(|e| ExperimentError::Config(e.to_string()))
}

/// Tabulates each stage with its verdict; stable ordering (the stage list
/// order is the execution order). Returns true when nothing failed.
pub fn print_report(out_dir: &Path, mut sink: impl std::io::Write) -> Result<bool, ExperimentError> {
    let summary = read_summary(out_dir)?;
    let stages = summary["stages"]
        .as_array()
        .ok_or_else(|| ExperimentError::Config("summary.json has no stages".into()))?;
    let mut all_ok = true;
    writeln!(sink, "{:<16} {:<6} details", "stage", "verdict")
        .map_err(|e| io_err(out_dir, e))?;
    for stage in stages {
        let name = stage["name"].as_str().unwrap_or("?");
        let verdict = match stage["passed"] {
            serde_json::Value::Bool(true) => "pass",
            serde_json::Value::Bool(false) => {
                all_ok = false;
                "FAIL"
            }
            _ => "-",
        };
        let details = stage["details"].as_str().unwrap_or("");
        writeln!(sink, "{name:<16} {verdict:<6} {details}").map_err(|e| io_err(out_dir, e))?;
    }
    // count inconclusive paths separately when the walk stage ran
    let walk_path = out_dir.join("walk_report.json");
    if walk_path.exists() {
        let text = fs::read_to_string(&walk_path).map_err(|e| io_err(&walk_path, e))?;
        let walk: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        writeln!(
            sink,
            "walk paths: {} total, {} with burn-in, {} inconclusive",
            walk["paths"], walk["valid_k0"], walk["inconclusive"]
        )
        .map_err(|e| io_err(&walk_path, e))?;
    }
    Ok(all_ok)
}
