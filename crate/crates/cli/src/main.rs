//! Experiment runner CLI.
//!
//! `exptype run --config <path> --out <dir> [--threads K] [--precision-bits P]`
//!
//! Exit codes: 0 all pass, 1 experiment failure, 2 config error.

use clap::{Parser, Subcommand};
use exptype_core::runner::{self, ExperimentConfig};
use exptype_core::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "exptype", about = "Entire-function zero-distribution experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment config and write CSV/JSON reports.
    Run {
        /// Experiment config (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Output directory; reports land in `<out>/<tag>/`.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (results are identical for any value).
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Override the starting precision (bits).
        #[arg(long)]
        precision_bits: Option<u32>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out, threads, precision_bits } => {
            let mut cfg = match ExperimentConfig::load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(2);
                }
            };
            if let Some(p) = precision_bits {
                cfg.experiment.precision_start = p;
                if cfg.experiment.precision_cap < p {
                    cfg.experiment.precision_cap = p;
                }
            }
            if let Err(e) = cfg.validate() {
                eprintln!("config error: {e}");
                return ExitCode::from(2);
            }
            match runner::run(&cfg, &out, threads) {
                Ok(report) => {
                    for row in &report.rows {
                        println!(
                            "[{}] {} observed={:.6e} predicted={:.6e} {}",
                            row.experiment,
                            row.label,
                            row.observed,
                            row.predicted,
                            if row.pass { "pass" } else { "FAIL" }
                        );
                    }
                    if report.all_pass {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e @ Error::Config(_)) => {
                    eprintln!("config error: {e}");
                    ExitCode::from(2)
                }
                Err(e) => {
                    eprintln!("experiment failed: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
