//! Realization of the stationary families: Gaussian spectral synthesis,
//! moving averages, and finite-state Markov chains.

use super::noise;
use super::unit_phase;
use crate::spectra::SpectralMeasure;
use crate::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;

pub(crate) const STREAM_IID: u64 = 1;
pub(crate) const STREAM_MA: u64 = 2;
pub(crate) const STREAM_ATOM: u64 = 3;
pub(crate) const STREAM_DENSITY: u64 = 4;
pub(crate) const STREAM_MARKOV: u64 = 5;
pub(crate) const STREAM_MARKOV_INIT: u64 = 6;

/// Gaussian stationary realization on `0..=n_max`.
///
/// Atom part: `sum_j sqrt(a_j) zeta_j e^{i t_j n}`. Density part: Fourier
/// synthesis over `K >= 8 (n_max + 1)` midpoint frequencies, weights
/// `sqrt(density * spacing)`, evaluated with one inverse FFT.
pub(crate) fn synthesize_gaussian(
    rho: &SpectralMeasure,
    n_max: usize,
    seed: u64,
) -> Vec<Complex64> {
    let len = n_max + 1;
    let mut out = vec![Complex64::new(0.0, 0.0); len];

    for (j, &(t, a)) in rho.atoms().iter().enumerate() {
        let (g_re, g_im) = noise::complex_gaussian(seed, STREAM_ATOM, j as u64);
        let amp = a.sqrt() * Complex64::new(g_re, g_im);
        for (n, slot) in out.iter_mut().enumerate() {
            *slot += amp * unit_phase(t, n as u64);
        }
    }

    let has_density = rho.density_pieces().iter().any(|&(_, _, level)| level > 0.0);
    if has_density {
        let k = (8 * len).next_power_of_two();
        let spacing = 2.0 * std::f64::consts::PI / k as f64;
        let mut grid = vec![Complex64::new(0.0, 0.0); k];
        for (l, slot) in grid.iter_mut().enumerate() {
            let u = -std::f64::consts::PI + spacing * (l as f64 + 0.5);
            let w = rho.density_at(u) * spacing;
            if w > 0.0 {
                let (g_re, g_im) = noise::complex_gaussian(seed, STREAM_DENSITY, l as u64);
                *slot = w.sqrt() * Complex64::new(g_re, g_im);
            }
        }
        // sum_l v_l e^{i u_l n} = e^{i n (-pi + spacing/2)} * (unnormalized
        // inverse DFT of v at n), valid for n < K.
        let mut planner = FftPlanner::new();
        planner.plan_fft_inverse(k).process(&mut grid);
        let base = -std::f64::consts::PI + 0.5 * spacing;
        for (n, slot) in out.iter_mut().enumerate() {
            *slot += grid[n] * unit_phase(base, n as u64);
        }
    }

    out
}

/// `xi(n) = sum_j kernel[j] eta(n - j)` with per-index deterministic noise.
pub(crate) fn moving_average_at(
    kernel: &[f64],
    base: super::MaBase,
    seed: u64,
    n: i64,
) -> Complex64 {
    let l = kernel.len() as i64 - 1;
    let mut acc = 0.0;
    for (j, &kj) in kernel.iter().enumerate() {
        if kj == 0.0 {
            continue;
        }
        let idx = (n - j as i64 + l) as u64; // shifted so eta(-L).. maps to 0..
        let eta = match base {
            super::MaBase::SignSymmetric => noise::sign(seed, STREAM_MA, idx),
            super::MaBase::BoundedUniform => noise::uniform_symmetric(seed, STREAM_MA, idx),
        };
        acc += kj * eta;
    }
    Complex64::new(acc, 0.0)
}

/// Rejects non-stochastic or reducible transition matrices.
pub(crate) fn validate_markov(outputs: &[i64], transition: &[Vec<f64>]) -> Result<()> {
    let n = outputs.len();
    if n == 0 {
        return Err(Error::InvalidSequence("markov model with no states".into()));
    }
    if transition.len() != n || transition.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidSequence("transition matrix shape mismatch".into()));
    }
    for row in transition {
        if row.iter().any(|&p| !(0.0..=1.0 + 1e-12).contains(&p)) {
            return Err(Error::InvalidSequence("transition probabilities outside [0, 1]".into()));
        }
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidSequence(format!("transition row sums to {s}, not 1")));
        }
    }
    if !strongly_connected(transition) {
        return Err(Error::InvalidSequence("reducible markov chain".into()));
    }
    Ok(())
}

fn strongly_connected(transition: &[Vec<f64>]) -> bool {
    let n = transition.len();
    let reach = |forward: bool| -> Vec<bool> {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let edge = if forward { transition[i][j] } else { transition[j][i] };
                if edge > 0.0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen
    };
    reach(true).into_iter().all(|s| s) && reach(false).into_iter().all(|s| s)
}

/// Realize a stationary Markov chain of outputs on `0..=n_max`.
///
/// The initial state is drawn from the stationary distribution (fixed-point
/// iteration of the transition matrix), so shifted-window statistics match
/// the two-sided stationary process.
pub(crate) fn realize_markov(
    outputs: &[i64],
    transition: &[Vec<f64>],
    n_max: usize,
    seed: u64,
) -> Vec<i64> {
    let n = outputs.len();
    let mut pi = vec![1.0 / n as f64; n];
    for _ in 0..512 {
        let mut next = vec![0.0; n];
        for (i, &p) in pi.iter().enumerate() {
            for j in 0..n {
                next[j] += p * transition[i][j];
            }
        }
        pi = next;
    }
    let draw = |dist: &[f64], u: f64| -> usize {
        let mut acc = 0.0;
        for (i, &p) in dist.iter().enumerate() {
            acc += p;
            if u <= acc {
                return i;
            }
        }
        dist.len() - 1
    };
    let mut state = draw(&pi, noise::uniform_open(seed, STREAM_MARKOV_INIT, 0));
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(outputs[state]);
    for step in 0..n_max {
        let u = noise::uniform_open(seed, STREAM_MARKOV, step as u64);
        state = draw(&transition[state], u);
        out.push(outputs[state]);
    }
    out
}
