//! Entire functions of exponential type built from multiplier sequences.
//!
//! The library constructs functions `F(z) = sum_n xi(n) z^n / n!` for several
//! families of deterministic and random multiplier sequences `xi`, evaluates
//! them stably at large radius, locates the zeros of their Taylor sections,
//! and compares the observed angular zero statistics against the predictions
//! coming from the spectral data of `xi`.
//!
//! Module map:
//!
//! - [`sequences`] — multiplier-sequence families and their realizations,
//! - [`spectra`] — spectra on the unit circle, supporting functions, angular
//!   zero densities, and the circle variance formula,
//! - [`expsums`] — the Gaussian-windowed exponential sums `W_R`, windowed
//!   averages `X_R`, Weyl sums, witness scans, and the cubic-phase
//!   saddle-point approximation,
//! - [`entire`] — precision-certified evaluation of `log|F|`,
//! - [`zeros`] — Taylor-section zero finding, sector counts by the argument
//!   principle, angular histograms, and reciprocal-sum diagnostics,
//! - [`dichotomy`] — periodicity vs. full-spectral-support detection for
//!   integer-valued stationary samples,
//! - [`runner`] — experiment configs, orchestration, and CSV/JSON reports.

pub mod dichotomy;
pub mod entire;
pub mod error;
pub mod expsums;
pub mod num;
pub mod runner;
pub mod sequences;
pub mod spectra;
pub mod zeros;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
