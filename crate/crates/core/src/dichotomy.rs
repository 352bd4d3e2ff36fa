//! Periodicity versus full-spectral-support detection for integer-valued
//! stationary samples.
//!
//! An integer-valued stationary sequence either has spectral support
//! covering the whole circle or is periodic with support inside the roots of
//! unity; at finite sample size this dichotomy is realized as exact
//! recurrence detection (with a burn-in allowance) against a smoothed
//! periodogram coverage estimate, with an honest `Inconclusive` verdict in
//! between.

use crate::sequences::MultiplierSequence;
use crate::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;

/// Outcome of the dichotomy detector.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Periodic {
        period: usize,
        /// Fraction of periodogram mass within a bandwidth of the period's
        /// roots of unity.
        spectral_localization: f64,
    },
    FullSupport,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct DichotomyVerdict {
    pub verdict: Verdict,
    /// Fraction of the circle above the periodogram threshold.
    pub support_coverage: f64,
    /// Least recurrence order found, if any.
    pub recurrence_order: Option<usize>,
    /// Threshold actually applied (tau times the median smoothed level).
    pub threshold_used: f64,
}

/// Least `N <= max_period` with `x(n + N) = x(n)` on the trailing 75% of the
/// sample (25% burn-in), or `None`.
pub fn detect_period(sample: &[i64], max_period: usize) -> Result<Option<usize>> {
    if max_period == 0 || sample.len() < 4 * max_period {
        return Err(Error::InvalidSequence(format!(
            "sample of {} too short for max period {max_period} (need 4x)",
            sample.len()
        )));
    }
    let start = sample.len() / 4;
    'candidate: for period in 1..=max_period {
        for n in start..sample.len() - period {
            if sample[n] != sample[n + period] {
                continue 'candidate;
            }
        }
        return Ok(Some(period));
    }
    Ok(None)
}

/// Smoothed-periodogram support estimate.
#[derive(Clone, Debug)]
pub struct PeriodogramSupport {
    /// Fraction of frequencies above threshold.
    pub coverage: f64,
    /// Arcs of the circle above threshold, angles in `(-pi, pi]`.
    pub arcs: Vec<(f64, f64)>,
    /// Mass of the subtracted mean (the atom at angle zero), reported
    /// separately from the mean-free spectrum.
    pub mean_mass: f64,
    /// `tau * median` threshold actually used.
    pub threshold: f64,
    /// The smoothed periodogram itself (length `window`).
    pub smoothed: Vec<f64>,
}

/// Mean-subtracted smoothed periodogram of the first `window` entries,
/// thresholded at `tau` times its median level.
pub fn periodogram_support(
    sample: &[i64],
    window: usize,
    bandwidth: usize,
    tau: f64,
) -> Result<PeriodogramSupport> {
    if window == 0 || window > sample.len() {
        return Err(Error::InvalidSequence(format!(
            "periodogram window {window} outside sample length {}",
            sample.len()
        )));
    }
    let n = window;
    let mean: f64 = sample[..n].iter().map(|&v| v as f64).sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> =
        sample[..n].iter().map(|&v| Complex64::new(v as f64 - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let period_gram: Vec<f64> = buf.iter().map(|z| z.norm_sqr() / n as f64).collect();

    // Circular moving average over the bandwidth.
    let b = bandwidth.max(1).min(n);
    let smoothed: Vec<f64> = (0..n)
        .map(|k| {
            let mut acc = 0.0;
            for j in 0..b {
                let idx = (k + n + j - b / 2) % n;
                acc += period_gram[idx];
            }
            acc / b as f64
        })
        .collect();

    let mut sorted = smoothed.clone();
    sorted.sort_by(f64::total_cmp);
    let median = if n % 2 == 0 {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    } else {
        sorted[n / 2]
    };
    let threshold = tau * median;

    let above: Vec<bool> = smoothed.iter().map(|&v| v > threshold && v > 0.0).collect();
    let coverage = above.iter().filter(|&&a| a).count() as f64 / n as f64;

    // Contiguous runs above threshold, as arcs (DFT bin k <-> angle 2 pi k/n).
    let mut arcs = Vec::new();
    let mut run_start: Option<usize> = None;
    for k in 0..=n {
        let on = k < n && above[k];
        match (on, run_start) {
            (true, None) => run_start = Some(k),
            (false, Some(s)) => {
                let lo = bin_angle(s, n);
                let hi = bin_angle(k - 1, n) + 2.0 * std::f64::consts::PI / n as f64;
                arcs.push((lo, hi));
                run_start = None;
            }
            _ => {}
        }
    }
    Ok(PeriodogramSupport {
        coverage,
        arcs,
        mean_mass: mean * mean,
        threshold,
        smoothed,
    })
}

fn bin_angle(k: usize, n: usize) -> f64 {
    crate::num::principal_angle(2.0 * std::f64::consts::PI * k as f64 / n as f64)
}

/// Fraction of smoothed-periodogram mass within `bandwidth` bins of the
/// `period`-th roots of unity.
fn root_of_unity_localization(smoothed: &[f64], period: usize, bandwidth: usize) -> f64 {
    let n = smoothed.len();
    let total: f64 = smoothed.iter().sum();
    if total <= 0.0 {
        return 1.0; // constant sequence: no mass to misplace
    }
    let mut near = 0.0;
    for (k, &v) in smoothed.iter().enumerate() {
        // Distance from bin k to the nearest multiple of n/period, in bins.
        let spacing = n as f64 / period as f64;
        let pos = k as f64 / spacing;
        let dist_bins = (pos - pos.round()).abs() * spacing;
        if dist_bins <= bandwidth as f64 {
            near += v;
        }
    }
    near / total
}

/// Parameters of the periodogram side of the detector.
#[derive(Clone, Copy, Debug)]
pub struct PeriodogramParams {
    pub window: usize,
    pub bandwidth: usize,
    pub tau: f64,
    pub coverage_cutoff: f64,
}

impl Default for PeriodogramParams {
    fn default() -> Self {
        PeriodogramParams { window: 1 << 14, bandwidth: 64, tau: 0.2, coverage_cutoff: 0.9 }
    }
}

/// Runs the dichotomy detector on a realized integer sample of the sequence.
pub fn dichotomy_check(
    seq: &MultiplierSequence,
    sample_len: usize,
    max_period: usize,
    params: PeriodogramParams,
) -> Result<DichotomyVerdict> {
    if !seq.is_integer_valued() {
        return Err(Error::InvalidSequence(
            "dichotomy detector needs an integer-valued sequence kind".into(),
        ));
    }
    let sample = seq.integer_sample(sample_len)?;
    let recurrence = detect_period(&sample, max_period)?;
    let pg = periodogram_support(&sample, params.window.min(sample_len), params.bandwidth, params.tau)?;
    if let Some(period) = recurrence {
        let loc = root_of_unity_localization(&pg.smoothed, period, params.bandwidth);
        return Ok(DichotomyVerdict {
            verdict: Verdict::Periodic { period, spectral_localization: loc },
            support_coverage: pg.coverage,
            recurrence_order: Some(period),
            threshold_used: pg.threshold,
        });
    }
    let verdict = if pg.coverage >= params.coverage_cutoff {
        Verdict::FullSupport
    } else {
        Verdict::Inconclusive
    };
    Ok(DichotomyVerdict {
        verdict,
        support_coverage: pg.coverage,
        recurrence_order: None,
        threshold_used: pg.threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{integer_stationary_seq, IntegerModel};

    fn pattern_seq(pattern: Vec<i64>) -> MultiplierSequence {
        integer_stationary_seq(IntegerModel::Pattern { pattern }, 0).unwrap()
    }

    #[test]
    fn detects_simple_periods() {
        let s: Vec<i64> = (0..256).map(|n| [1, 2][n % 2]).collect();
        assert_eq!(detect_period(&s, 16).unwrap(), Some(2));
        let c = vec![3i64; 256];
        assert_eq!(detect_period(&c, 16).unwrap(), Some(1));
        assert!(detect_period(&c[..30], 16).is_err());
    }

    #[test]
    fn eventual_periodicity_with_burn_in() {
        // Aperiodic head, periodic tail: the burn-in absorbs the head.
        let mut s: Vec<i64> = vec![9, 7, 5, 9, 2, 4];
        s.extend((0..250).map(|n| [1, 2, 3][n % 3]));
        assert_eq!(detect_period(&s, 16).unwrap(), Some(3));
    }

    #[test]
    fn iid_sample_has_no_period() {
        let seq = integer_stationary_seq(IntegerModel::Iid { alphabet: vec![0, 1] }, 5).unwrap();
        let sample = seq.integer_sample(4096).unwrap();
        assert_eq!(detect_period(&sample, 64).unwrap(), None);
    }

    #[test]
    fn periodogram_iid_covers_circle() {
        for seed in 0..20u64 {
            let seq =
                integer_stationary_seq(IntegerModel::Iid { alphabet: vec![0, 1] }, seed).unwrap();
            let sample = seq.integer_sample(1 << 14).unwrap();
            let pg = periodogram_support(&sample, 1 << 14, 64, 0.2).unwrap();
            assert!(pg.coverage >= 0.95, "seed {seed}: coverage {}", pg.coverage);
        }
    }

    #[test]
    fn periodogram_alternating_spike() {
        let seq = pattern_seq(vec![1, 2]);
        let sample = seq.integer_sample(1 << 12).unwrap();
        let n = 1 << 12;
        let b = 16;
        let pg = periodogram_support(&sample, n, b, 0.2).unwrap();
        // After mean subtraction only the angle-pi spike survives.
        assert!(pg.coverage <= 2.0 * b as f64 / n as f64 + 0.02, "coverage {}", pg.coverage);
        assert!(pg
            .arcs
            .iter()
            .any(|&(lo, hi)| lo <= std::f64::consts::PI + 1e-9 && std::f64::consts::PI <= hi + 1e-9
                || (lo - -std::f64::consts::PI).abs() < 0.1),
            "arcs: {:?}", pg.arcs);
        assert!((pg.mean_mass - 2.25).abs() < 1e-9); // mean 1.5
    }

    #[test]
    fn periodogram_constant_sequence() {
        let seq = pattern_seq(vec![3]);
        let sample = seq.integer_sample(1024).unwrap();
        let pg = periodogram_support(&sample, 1024, 8, 0.2).unwrap();
        assert_eq!(pg.coverage, 0.0);
        assert!((pg.mean_mass - 9.0).abs() < 1e-9);
    }

    #[test]
    fn periodogram_mass_conservation() {
        let seq = integer_stationary_seq(IntegerModel::Iid { alphabet: vec![0, 1, 5] }, 3).unwrap();
        let sample = seq.integer_sample(4096).unwrap();
        let pg = periodogram_support(&sample, 4096, 32, 0.2).unwrap();
        let mean: f64 = sample.iter().map(|&v| v as f64).sum::<f64>() / 4096.0;
        let variance: f64 =
            sample.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / 4096.0;
        let mass: f64 = pg.smoothed.iter().sum::<f64>() / 4096.0;
        assert!(
            (mass - variance).abs() <= 1e-8 * variance,
            "mass {mass} variance {variance}"
        );
    }

    #[test]
    fn dichotomy_pattern_is_periodic_and_localized() {
        let seq = pattern_seq(vec![0, 1, 2]);
        let v = dichotomy_check(&seq, 4096, 16, PeriodogramParams {
            window: 3999, // not a multiple of 3; localization must still hold
            bandwidth: 16,
            ..Default::default()
        })
        .unwrap();
        match v.verdict {
            Verdict::Periodic { period, spectral_localization } => {
                assert_eq!(period, 3);
                assert!(spectral_localization > 0.99, "loc {spectral_localization}");
            }
            other => panic!("expected periodic, got {other:?}"),
        }
    }

    #[test]
    fn dichotomy_iid_full_support() {
        let seq = integer_stationary_seq(IntegerModel::Iid { alphabet: vec![0, 1, 2] }, 9).unwrap();
        let v = dichotomy_check(&seq, 1 << 14, 64, PeriodogramParams::default()).unwrap();
        assert_eq!(v.verdict, Verdict::FullSupport);
        assert!(v.support_coverage >= 0.9);
    }

    #[test]
    fn dichotomy_markov_full_support() {
        let model = IntegerModel::Markov {
            outputs: vec![0, 3],
            transition: vec![vec![0.7, 0.3], vec![0.4, 0.6]],
            n_max: 1 << 14,
        };
        let seq = integer_stationary_seq(model, 21).unwrap();
        let v = dichotomy_check(&seq, 1 << 14, 64, PeriodogramParams::default()).unwrap();
        assert_eq!(v.verdict, Verdict::FullSupport);
    }

    #[test]
    fn dichotomy_rejects_non_integer_kinds() {
        let seq = crate::sequences::constant_one();
        assert!(dichotomy_check(&seq, 1024, 8, PeriodogramParams::default()).is_err());
    }

    #[test]
    fn periodic_verdict_reverifies_exactly() {
        for period in 1..=16usize {
            let pattern: Vec<i64> = (0..period as i64).collect();
            let seq = pattern_seq(pattern.clone());
            let v = dichotomy_check(&seq, 4096.max(8 * period), 16, PeriodogramParams::default())
                .unwrap();
            match v.verdict {
                Verdict::Periodic { period: p, .. } => {
                    // detect_period returns the least period, which divides
                    // the nominal one (patterns like (0,1,0,1) fold).
                    assert!(period % p == 0, "pattern {period} -> detected {p}");
                    let sample = seq.integer_sample(4096).unwrap();
                    for n in 0..sample.len() - p {
                        assert_eq!(sample[n], sample[n + p]);
                    }
                }
                other => panic!("pattern {period}: expected periodic, got {other:?}"),
            }
        }
    }
}
