//! Report artifacts: deterministic CSV data files plus one JSON summary.
//!
//! CSV bytes are a pure function of the config (timestamps and wall times
//! live only in the JSON summary), which is what makes byte-level
//! reproducibility checks meaningful.

use crate::Result;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

/// One line of the experiment summary.
#[derive(Clone, Debug, Serialize)]
pub struct ReportRow {
    pub experiment: String,
    /// Parameters echo (radius, seed, angle, ... as `key=value` pairs).
    pub label: String,
    pub observed: f64,
    pub predicted: f64,
    pub deviation: f64,
    pub pass: bool,
    pub wall_ms: f64,
}

impl ReportRow {
    pub fn new(experiment: &str, label: String, observed: f64, predicted: f64, pass: bool) -> Self {
        ReportRow {
            experiment: experiment.to_string(),
            label,
            observed,
            predicted,
            deviation: observed - predicted,
            pass,
            wall_ms: 0.0,
        }
    }

    pub fn with_wall(mut self, ms: f64) -> Self {
        self.wall_ms = ms;
        self
    }
}

/// A CSV file to be written under the experiment directory.
#[derive(Clone, Debug)]
pub struct CsvTable {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        CsvTable {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Shortest-roundtrip float formatting (deterministic for identical values).
pub fn fmt(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v}")
    }
}

#[derive(Serialize)]
pub struct RunSummary<'a> {
    pub tag: &'a str,
    pub all_pass: bool,
    pub rows: &'a [ReportRow],
    pub csv_files: Vec<String>,
    pub wall_seconds: f64,
    pub unix_timestamp: u64,
    pub threads: usize,
    pub config: &'a super::config::ExperimentConfig,
}

/// Writes all tables and the summary; returns the created file paths.
pub fn write_outputs(
    dir: &Path,
    tables: &[CsvTable],
    summary: &RunSummary<'_>,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for t in tables {
        let path = dir.join(format!("{}.csv", t.name));
        let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
        writeln!(f, "{}", t.header.join(","))?;
        for row in &t.rows {
            writeln!(f, "{}", row.join(","))?;
        }
        f.flush()?;
        paths.push(path);
    }
    let path = dir.join("summary.json");
    let mut f = std::fs::File::create(&path)?;
    let text = serde_json::to_string_pretty(summary)
        .map_err(|e| crate::Error::Config(format!("summary serialization: {e}")))?;
    f.write_all(text.as_bytes())?;
    f.write_all(b"\n")?;
    paths.push(path);
    Ok(paths)
}
