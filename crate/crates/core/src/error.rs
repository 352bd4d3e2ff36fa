//! Crate error type.

use thiserror::Error;

/// Errors produced by sequence construction, evaluation, and experiments.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid sequence parameters: {0}")]
    InvalidSequence(String),

    #[error("sequence index {index} outside realized range {lo}..={hi}")]
    IndexRange { index: i64, lo: i64, hi: i64 },

    #[error("insufficient realization length: need {needed}, have {have}")]
    RealizationLength { needed: usize, have: usize },

    #[error("invalid spectrum or measure: {0}")]
    InvalidSpectrum(String),

    #[error("sector endpoint {theta} collides with an atom of the angular density")]
    AtomAtEndpoint { theta: f64 },

    #[error("quadrature did not reach tolerance {requested:e}; achieved {achieved:e}")]
    Quadrature { requested: f64, achieved: f64 },

    #[error("invalid exponential-sum parameters: {0}")]
    InvalidExpSum(String),

    #[error("precision budget exceeded: needed about {needed} bits, cap {cap}")]
    PrecisionCap { needed: u32, cap: u32 },

    #[error(
        "massive cancellation at {bits} bits (|sum| {sum_abs:e} below error bound {error_bound:e}); raise the precision"
    )]
    Cancellation { bits: u32, sum_abs: f64, error_bound: f64 },

    #[error("root finder failed to converge: {0}")]
    RootFinding(String),

    #[error("zero-count validation mismatch: located {located}, winding {winding}")]
    CountMismatch { located: usize, winding: i64 },

    #[error("boundary zero: retries exhausted while perturbing the contour at r={r}")]
    BoundaryZero { r: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("experiment failed: {0}")]
    Experiment(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
