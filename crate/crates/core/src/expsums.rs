//! Exponential sums: the Gaussian-windowed sums `W_R`, their windowed
//! squared averages `X_R`, Weyl autocorrelation sums `S_T`, thick radius
//! grids with witness scans, and the cubic-phase saddle-point approximation
//! for the `n^{3/2}` family.
//!
//! Conventions: `theta` is in cycles, `e(t) = exp(2 pi i t)`, and
//! `W_R(theta) = sum_{|n| <= N} xi(n + R) e(n theta) e^{-n^2/(2R)}` with the
//! default window `N = round(sqrt(R) ln R)`. The saddle approximation of
//! [`saddle_w_r`] targets the variant with `e((n + R) theta)`, which differs
//! by the unimodular factor `e(R theta)`.

use crate::num::kahan::{KahanComplex, KahanSum};
use crate::num::{e, frac};
use crate::sequences::{self, ExactReal, MultiplierSequence, PhasePolynomial};
use crate::{Error, Result};
use num_complex::Complex64;
use rug::Float;
use rustfft::FftPlanner;

/// The fixed window bump `g(t) = (2/3)(1 + cos 2 pi t)^2` on `[-1/2, 1/2]`.
///
/// Non-negative, even, `int g = 1`, and `C^2` with `g = g' = g'' = 0` at the
/// endpoints; the Fourier transform has the closed form in [`WindowKernel::g_hat`]
/// and decays like `u^{-3}`.
pub struct WindowKernel;

impl WindowKernel {
    /// Upper bound for `u^2 |g_hat(u)|` over all real `u`; the observed
    /// supremum is ~0.8732 near `|u| = 1.49` (pinned by a dense-grid test).
    pub const C0: f64 = 0.88;

    /// Envelope factor for block decompositions of the off-diagonal sum:
    /// the Gaussian weight `e^{-(n^2+(n-T)^2)/(2R)}` on the block at signed
    /// distance `k sqrt(R)` from `n = T/2` is at most `e^{-(|k|-1)^2}`, and
    /// summation by parts costs another factor of two, so the per-shift
    /// block maxima enter multiplied by `2 sum_k e^{-(|k|-1)^2} < 6.3`.
    pub const BLOCK_ENVELOPE: f64 = 6.3;

    pub fn g(t: f64) -> f64 {
        if !(-0.5..=0.5).contains(&t) {
            return 0.0;
        }
        let c = (2.0 * std::f64::consts::PI * t).cos();
        (2.0 / 3.0) * (1.0 + c) * (1.0 + c)
    }

    /// Fourier transform `g_hat(u) = int g(t) e(-ut) dt` (real and even).
    pub fn g_hat(u: f64) -> f64 {
        let u = u.abs();
        // g_hat(u) = (2/3) [ (3/2) sinc(u) + 2u s1(u) - (u/2) s2(u) ] with
        // sinc(u) = sin(pi u)/(pi u), s1 = sin(pi u)/(pi (1 - u^2)),
        // s2 = sin(pi u)/(pi (4 - u^2)); removable singularities at
        // u = 0, 1, 2 are evaluated through the shifted sinc form.
        let sinc = |x: f64| {
            if x.abs() < 1e-7 {
                let p = std::f64::consts::PI * x;
                1.0 - p * p / 6.0
            } else {
                (std::f64::consts::PI * x).sin() / (std::f64::consts::PI * x)
            }
        };
        let s1 = if (u - 1.0).abs() < 1e-7 {
            let d = u - 1.0;
            sinc(d) / (2.0 + d)
        } else {
            (std::f64::consts::PI * u).sin() / (std::f64::consts::PI * (1.0 - u * u))
        };
        let s2 = if (u - 2.0).abs() < 1e-7 {
            let d = u - 2.0;
            -sinc(d) / (4.0 + d)
        } else {
            (std::f64::consts::PI * u).sin() / (std::f64::consts::PI * (4.0 - u * u))
        };
        (2.0 / 3.0) * (1.5 * sinc(u) + 2.0 * u * s1 - 0.5 * u * s2)
    }
}

/// Default window length `N = round(sqrt(R) ln R)`.
pub fn default_window(r: u64) -> usize {
    let rf = r as f64;
    (rf.sqrt() * rf.ln()).round() as usize
}

/// Radii `R_j = round(e^{j^delta})` for `j` in an index range; consecutive
/// ratios tend to one, which is what upgrades pointwise witnesses to full
/// angular statements.
#[derive(Clone, Debug, PartialEq)]
pub struct ThickGrid {
    pub delta: f64,
    pub j_lo: u32,
    pub j_hi: u32,
}

impl ThickGrid {
    pub fn new(delta: f64, j_lo: u32, j_hi: u32) -> Result<Self> {
        if !(0.0 < delta && delta < 1.0) {
            return Err(Error::InvalidExpSum(format!("thickness exponent {delta} outside (0,1)")));
        }
        if j_lo == 0 || j_hi < j_lo {
            return Err(Error::InvalidExpSum("bad thick-grid index range".into()));
        }
        Ok(ThickGrid { delta, j_lo, j_hi })
    }

    /// Strictly increasing radii (collisions after rounding are dropped).
    pub fn radii(&self) -> Vec<u64> {
        let mut out: Vec<u64> = Vec::new();
        for j in self.j_lo..=self.j_hi {
            let exponent = (j as f64).powf(self.delta);
            if exponent > 41.7 {
                break; // e^{41.7} ~ 1.3e18; past any usable radius
            }
            let r = exponent.exp().round() as u64;
            if out.last().map(|&l| r > l).unwrap_or(true) {
                out.push(r);
            }
        }
        out
    }

    /// Largest consecutive ratio gap `max_j (R_{j+1}/R_j - 1)`.
    pub fn max_ratio_gap(&self) -> f64 {
        self.radii()
            .windows(2)
            .map(|w| w[1] as f64 / w[0] as f64 - 1.0)
            .fold(0.0, f64::max)
    }
}

fn check_w_params(r: u64, n: usize) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidExpSum(format!("radius R = {r} below 2")));
    }
    if n as u64 >= r {
        return Err(Error::InvalidExpSum(format!(
            "window N = {n} reaches negative indices at R = {r}"
        )));
    }
    Ok(())
}

/// `W_R(theta)` by compensated direct summation.
pub fn w_r_direct(
    seq: &MultiplierSequence,
    r: u64,
    theta: f64,
    n_override: Option<usize>,
) -> Result<Complex64> {
    let n = n_override.unwrap_or_else(|| default_window(r));
    check_w_params(r, n)?;
    let window = seq.eval_range(r as i64 - n as i64, r as i64 + n as i64)?;
    let mut acc = KahanComplex::new();
    let inv_2r = 1.0 / (2.0 * r as f64);
    for (i, xi) in window.iter().enumerate() {
        let kf = (i as i64 - n as i64) as f64;
        let phase = e((kf * theta).fract());
        let weight = (-kf * kf * inv_2r).exp();
        acc.add(xi * phase * weight);
    }
    Ok(acc.value())
}

/// `W_R` on the uniform grid `theta = k/G` via one inverse FFT of the
/// coefficient vector `xi(n + R) e^{-n^2/(2R)}` zero-padded to `G`.
pub fn w_r_grid(seq: &MultiplierSequence, r: u64, grid_size: usize) -> Result<Vec<Complex64>> {
    let n = default_window(r);
    check_w_params(r, n)?;
    if grid_size < 4 * n + 2 {
        return Err(Error::InvalidExpSum(format!(
            "grid size {grid_size} below 4N+2 = {}",
            4 * n + 2
        )));
    }
    let window = seq.eval_range(r as i64 - n as i64, r as i64 + n as i64)?;
    let mut buf = vec![Complex64::new(0.0, 0.0); grid_size];
    let inv_2r = 1.0 / (2.0 * r as f64);
    for (i, xi) in window.iter().enumerate() {
        let k = i as i64 - n as i64;
        let kf = k as f64;
        let weight = (-kf * kf * inv_2r).exp();
        let slot = k.rem_euclid(grid_size as i64) as usize;
        buf[slot] += xi * weight;
    }
    FftPlanner::new().plan_fft_inverse(grid_size).process(&mut buf);
    Ok(buf)
}

/// Windowed average `X_R = int |W_R|^2 g(m(theta - a)) dtheta` by trapezoid
/// quadrature on at least `16 (2N + 1)` nodes.
pub fn x_r(seq: &MultiplierSequence, r: u64, a: f64, m: u32) -> Result<f64> {
    let n = default_window(r);
    check_w_params(r, n)?;
    if m == 0 {
        return Err(Error::InvalidExpSum("window scale m must be positive".into()));
    }
    let window = seq.eval_range(r as i64 - n as i64, r as i64 + n as i64)?;
    let inv_2r = 1.0 / (2.0 * r as f64);
    let coeffs: Vec<Complex64> = window
        .iter()
        .enumerate()
        .map(|(i, xi)| {
            let kf = (i as i64 - n as i64) as f64;
            xi * (-kf * kf * inv_2r).exp()
        })
        .collect();

    let points = 16 * (2 * n + 1);
    let mf = m as f64;
    let h = 1.0 / (mf * points as f64);
    let lo = a - 0.5 / mf;

    // W at the quadrature nodes. For m = 1 the window is a full period, so
    // one modulated FFT covers every node; otherwise evaluate directly.
    let values: Vec<Complex64> = if m == 1 {
        let mut buf = vec![Complex64::new(0.0, 0.0); points];
        for (i, c) in coeffs.iter().enumerate() {
            let k = i as i64 - n as i64;
            let slot = k.rem_euclid(points as i64) as usize;
            buf[slot] += c * e((k as f64 * lo).fract());
        }
        FftPlanner::new().plan_fft_inverse(points).process(&mut buf);
        buf
    } else {
        (0..points)
            .map(|j| {
                let theta = lo + j as f64 * h;
                let mut acc = KahanComplex::new();
                for (i, c) in coeffs.iter().enumerate() {
                    let k = (i as i64 - n as i64) as f64;
                    acc.add(c * e((k * theta).fract()));
                }
                acc.value()
            })
            .collect()
    };

    let mut acc = KahanSum::new();
    for (j, w) in values.iter().enumerate() {
        let theta = j as f64 * h - 0.5 / mf;
        acc.add(w.norm_sqr() * WindowKernel::g(mf * theta));
    }
    // g vanishes to second order at both window endpoints, so the periodized
    // trapezoid rule needs no endpoint correction.
    Ok(acc.value() * h)
}

/// `X_R` through the coefficient-space double sum with `g_hat((n2 - n1)/m)`;
/// the independent route used to cross-check the quadrature.
pub fn x_r_coefficient_form(seq: &MultiplierSequence, r: u64, a: f64, m: u32) -> Result<f64> {
    let n = default_window(r);
    check_w_params(r, n)?;
    if m == 0 {
        return Err(Error::InvalidExpSum("window scale m must be positive".into()));
    }
    let window = seq.eval_range(r as i64 - n as i64, r as i64 + n as i64)?;
    let len = window.len() as i64; // 2N + 1
    let inv_2r = 1.0 / (2.0 * r as f64);
    let weights: Vec<f64> = (0..len)
        .map(|i| {
            let kf = (i - n as i64) as f64;
            (-kf * kf * inv_2r).exp()
        })
        .collect();
    let mf = m as f64;
    let mut acc = KahanSum::new();
    for k in -(len - 1)..len {
        let gh = WindowKernel::g_hat(k as f64 / mf);
        if gh == 0.0 {
            continue;
        }
        // S_k = sum_n xi(n+R) conj(xi(n+k+R)) w_n w_{n+k}, k = n2 - n1.
        let mut s = KahanComplex::new();
        let lo = 0.max(-k);
        let hi = (len - 1).min(len - 1 - k);
        for i in lo..=hi {
            let j = i + k;
            s.add(
                window[i as usize]
                    * window[j as usize].conj()
                    * weights[i as usize]
                    * weights[j as usize],
            );
        }
        let phase = e((-(k as f64) * a).fract());
        acc.add((s.value() * phase * gh).re);
    }
    Ok(acc.value() / mf)
}

/// Phase function for Weyl sums: linear, polynomial (degree >= 2 part), or
/// fractional power.
#[derive(Clone, Debug)]
pub enum PhaseFn {
    /// `f(x) = alpha x`.
    Linear(ExactReal),
    /// `f(x) = sum_{k>=2} q_k x^k`.
    Polynomial(PhasePolynomial),
    /// `f(x) = x^beta`.
    Power(ExactReal),
}

impl PhaseFn {
    /// `frac(f(x))` at a precision matched to the phase magnitude.
    pub fn frac_at(&self, x: u64) -> f64 {
        match self {
            PhaseFn::Linear(alpha) => {
                let prec = frac::prec_for_magnitude(
                    ((x.max(2)) as f64).log2() + alpha.to_f64().abs().max(1.0).log2(),
                );
                let v = alpha.to_float(prec) * Float::with_val(prec, x);
                frac::frac_to_f64(&v)
            }
            PhaseFn::Polynomial(q) => {
                let prec = frac::prec_for_magnitude(q.magnitude_bits(x));
                frac::frac_to_f64(&q.eval(x, prec))
            }
            PhaseFn::Power(beta) => sequences::power_phase_frac(beta, x),
        }
    }
}

/// Weyl sum `S_T(M1, M2) = sum_{M1 <= n < M2} e(f(n+R) - f(n+R-T))`,
/// with both phases reduced mod 1 before the difference.
pub fn weyl_sum(f: &PhaseFn, t: u64, r: u64, m1: i64, m2: i64) -> Result<Complex64> {
    if m1 >= m2 {
        return Err(Error::InvalidExpSum("need M1 < M2".into()));
    }
    if (r as i64) + m1 - (t as i64) < 0 {
        return Err(Error::InvalidExpSum("phase argument below zero".into()));
    }
    let mut acc = KahanComplex::new();
    for n in m1..m2 {
        let hi = (n + r as i64) as u64;
        let dphi = f.frac_at(hi) - f.frac_at(hi - t);
        acc.add(e(dphi));
    }
    Ok(acc.value())
}

/// Diagonal term and off-diagonal bound of the short-interval average.
#[derive(Clone, Debug)]
pub struct Lemma5Decomposition {
    /// `(1/m) sum_{|n| <= N} e^{-n^2/R}`.
    pub diagonal: f64,
    /// `C0 * BLOCK_ENVELOPE * m * sum_T T^{-2} max_block |S_T|`.
    pub offdiagonal_bound: f64,
    /// Per-shift block maxima `(T, max |S_T| over length-sqrt(R) blocks)`.
    pub block_maxima: Vec<(u64, f64)>,
}

/// Splits `X_R` into the positive diagonal and an explicit off-diagonal
/// bound driven by Weyl-sum block maxima over windows of length `sqrt(R)`.
pub fn lemma5_decomposition(f: &PhaseFn, r: u64, m: u32) -> Result<Lemma5Decomposition> {
    let n = default_window(r);
    check_w_params(r, n)?;
    if m == 0 {
        return Err(Error::InvalidExpSum("window scale m must be positive".into()));
    }
    let mf = m as f64;
    let mut diag = KahanSum::new();
    for k in -(n as i64)..=(n as i64) {
        let kf = k as f64;
        diag.add((-kf * kf / r as f64).exp());
    }
    let diagonal = diag.value() / mf;

    // Reduced phases cached over the full argument window.
    let lo_arg = r - n as u64;
    let fracs: Vec<f64> = (lo_arg..=r + n as u64).map(|x| f.frac_at(x)).collect();
    let phase = |x: u64| -> f64 { fracs[(x - lo_arg) as usize] };

    let block = (r as f64).sqrt().ceil() as i64;
    let mut block_maxima = Vec::with_capacity(2 * n);
    let mut bound = KahanSum::new();
    for t in 1..=(2 * n) as u64 {
        let n_lo = -(n as i64) + t as i64;
        let n_hi = n as i64;
        let mut max_abs: f64 = 0.0;
        let mut start = n_lo;
        while start <= n_hi {
            let end = (start + block).min(n_hi + 1);
            let mut s = Complex64::new(0.0, 0.0);
            for v in start..end {
                let hi = (v + r as i64) as u64;
                s += e(phase(hi) - phase(hi - t));
            }
            max_abs = max_abs.max(s.norm());
            start = end;
        }
        block_maxima.push((t, max_abs));
        bound.add(max_abs / (t as f64 * t as f64));
    }
    Ok(Lemma5Decomposition {
        diagonal,
        offdiagonal_bound: WindowKernel::C0 * WindowKernel::BLOCK_ENVELOPE * mf * bound.value(),
        block_maxima,
    })
}

/// Saddle-point approximation of `W_R` for the `n^{3/2}` phase at integer
/// `R >= e^4`, in the `e((n + R) theta)` convention.
///
/// The Poisson index `j` runs over the integers within `(ln R)/2` of
/// `M = (3/2) sqrt(R)`; for integer `R` the factor `e(jR)` is one, leaving
/// `(2 R^{1/4}/sqrt 3) sum_j e(1/8 - (4/27)(j - theta)^3) e^{-(8/9)(j - M - theta)^2}`.
/// The cube reaches `R^{3/2}`, so its fractional part is extracted at
/// `1.5 log2 R + 96` bits.
pub fn saddle_w_r(r: u64, theta: f64) -> Result<Complex64> {
    let rf = r as f64;
    if rf < 54.598 {
        return Err(Error::InvalidExpSum(format!("saddle approximation needs R >= e^4, got {r}")));
    }
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::InvalidExpSum(format!("theta = {theta} outside [0, 1)")));
    }
    let magnitude_bits = 1.5 * rf.log2() + 8.0;
    let prec = frac::prec_for_magnitude(magnitude_bits);
    if prec > 16_384 {
        return Err(Error::PrecisionCap { needed: prec, cap: 16_384 });
    }
    let m_center = 1.5 * rf.sqrt();
    let half_width = 0.5 * rf.ln();
    let j_lo = (m_center - half_width).ceil() as i64;
    let j_hi = (m_center + half_width).floor() as i64;
    let mut acc = KahanComplex::new();
    for j in j_lo..=j_hi {
        let x = Float::with_val(prec, j) - Float::with_val(prec, theta);
        let x2 = x.clone().square();
        let cube = x2 * x;
        let phase_hp = cube * Float::with_val(prec, -4) / Float::with_val(prec, 27);
        let phase = 0.125 + frac::frac_to_f64(&phase_hp);
        let s = j as f64 - m_center - theta;
        let weight = (-8.0 / 9.0 * s * s).exp();
        acc.add(e(phase) * weight);
    }
    Ok(acc.value() * 2.0 * rf.powf(0.25) / 3.0f64.sqrt())
}

/// Number of saddle terms at radius `r` (the integer window around `M`).
pub fn saddle_term_count(r: u64) -> usize {
    let rf = r as f64;
    let m_center = 1.5 * rf.sqrt();
    let half_width = 0.5 * rf.ln();
    let j_lo = (m_center - half_width).ceil() as i64;
    let j_hi = (m_center + half_width).floor() as i64;
    (j_hi - j_lo + 1).max(0) as usize
}

/// One radius row of a witness scan.
#[derive(Clone, Debug)]
pub struct WitnessRow {
    pub r: u64,
    /// Location of the window maximum (cycles).
    pub theta_star: f64,
    pub max_abs_w: f64,
    /// `R^delta`.
    pub threshold: f64,
    pub pass: bool,
}

/// Scans `theta` over `[a - window, a + window]` (cyclically) on a grid of
/// spacing at most `1/(8N)` for each thick-grid radius, recording whether
/// the maximum of `|W_R|` clears `R^delta`.
pub fn witness_scan(
    seq: &MultiplierSequence,
    grid: &ThickGrid,
    a: f64,
    delta: f64,
    window: f64,
) -> Result<Vec<WitnessRow>> {
    if !(0.0 < window && window <= 0.5) {
        return Err(Error::InvalidExpSum(format!("window half-width {window} outside (0, 1/2]")));
    }
    let mut rows = Vec::new();
    for r in grid.radii() {
        let n = default_window(r);
        let g = (8 * n).next_power_of_two().max(4 * n + 2);
        let values = w_r_grid(seq, r, g)?;
        let gf = g as f64;
        let lo = a - window;
        let span = 2.0 * window;
        let mut best = (0usize, -1.0f64);
        for (k, v) in values.iter().enumerate() {
            let theta = k as f64 / gf;
            let mut d = theta - lo;
            d -= d.floor();
            if d <= span {
                let abs_w = v.norm();
                if abs_w > best.1 {
                    best = (k, abs_w);
                }
            }
        }
        let threshold = (r as f64).powf(delta);
        rows.push(WitnessRow {
            r,
            theta_star: best.0 as f64 / gf,
            max_abs_w: best.1,
            threshold,
            pass: best.1 >= threshold,
        });
    }
    Ok(rows)
}
