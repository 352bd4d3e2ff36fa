//! Experiment orchestration: config loading, seeded deterministic execution
//! with a fixed-size worker pool, CSV/JSON reporting, and the
//! precision-retry policy for cancellation-prone evaluations.

pub mod config;
mod experiments;
pub mod report;

pub use config::{ExperimentConfig, ExperimentTag};
pub use report::{CsvTable, ReportRow};

use crate::entire::{log_abs_f_retry, LogAbsResult};
use crate::sequences::MultiplierSequence;
use crate::{Error, Result};
use std::path::{Path, PathBuf};

/// Outcome of a full experiment run.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub all_pass: bool,
    pub rows: Vec<ReportRow>,
    /// Files written, the JSON summary last.
    pub files: Vec<PathBuf>,
}

/// Executes one experiment config, writing `<out>/<tag>/*.csv` and
/// `<out>/<tag>/summary.json`. Numerical outputs are identical for any
/// worker count: parallel tasks are indexed and reduced in order.
pub fn run(cfg: &ExperimentConfig, out_dir: &Path, threads: usize) -> Result<RunReport> {
    cfg.validate()?;
    let started = std::time::Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Experiment(format!("thread pool: {e}")))?;
    let (rows, tables) = pool.install(|| experiments::run_experiment(cfg))?;
    let all_pass = rows.iter().all(|r| r.pass);
    let dir = out_dir.join(cfg.experiment.tag.dir_name());
    let summary = report::RunSummary {
        tag: cfg.experiment.tag.dir_name(),
        all_pass,
        rows: &rows,
        csv_files: tables.iter().map(|t| format!("{}.csv", t.name)).collect(),
        wall_seconds: started.elapsed().as_secs_f64(),
        unix_timestamp: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        threads: threads.max(1),
        config: cfg,
    };
    let files = report::write_outputs(&dir, &tables, &summary)?;
    Ok(RunReport { all_pass, rows, files })
}

/// Doubles the working precision on cancellation until the cap; surfaces the
/// cap as an error instead of silently degrading. The returned record
/// carries the precision that finally succeeded.
pub fn precision_retry(
    seq: &MultiplierSequence,
    r: f64,
    theta: f64,
    p_start: u32,
    p_cap: u32,
) -> Result<LogAbsResult> {
    log_abs_f_retry(seq, r, theta, p_start, p_cap)
}
