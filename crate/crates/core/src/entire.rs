//! Precision-certified evaluation of `log |F(r e^{i theta})|` for
//! `F(z) = sum_n xi(n) z^n / n!`.
//!
//! Every term is scaled by `exp(n ln r - lnGamma(n+1) - r)`, which keeps all
//! magnitudes near `O(1/sqrt(r))` and removes overflow up to `r ~ 10^6`; the
//! sum runs at a caller-chosen precision with a running error bound, and a
//! sum that sinks below its own error bound is reported as cancellation
//! rather than silently retried — the retry-with-doubled-precision loop
//! belongs to the caller.
//!
//! `theta` here is in radians; [`lemma3_check`] takes cycles because it
//! compares against the exponential sum `W_R`.

use crate::num::hc::HpComplex;
use crate::sequences::MultiplierSequence;
use crate::zeros::truncation_degree;
use crate::{Error, Result};
use rug::Float;

#[derive(Clone, Copy, Debug)]
pub struct LogAbsResult {
    /// `log |F(r e^{i theta})|` (natural log); `-inf` when the sum vanished
    /// identically within tolerance.
    pub value: f64,
    /// Certified absolute error on `value`.
    pub error_bound: f64,
    /// Working precision used.
    pub precision_bits: u32,
    /// Number of Taylor terms summed.
    pub terms_used: usize,
}

/// `log mu(r)` for `mu(r) = e^r / sqrt(2 pi r)`.
pub fn mu_log(r: f64) -> f64 {
    r - 0.5 * (2.0 * std::f64::consts::PI * r).ln()
}

/// `log |F(r e^{i theta})|` at precision `p` (at least 64 bits).
///
/// Terms are generated by the ratio recurrence `t_{n+1} = t_n r/(n+1)`
/// starting from `t_0 = e^{-r}` — identical in value to the
/// `exp(n ln r - lnGamma(n+1) - r)` scaling, with one rounding per step
/// which the running error bound accounts for.
pub fn log_abs_f(seq: &MultiplierSequence, r: f64, theta: f64, p: u32) -> Result<LogAbsResult> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidSequence(format!("radius {r} invalid")));
    }
    if p < 64 {
        return Err(Error::InvalidSequence(format!("precision {p} below 64 bits")));
    }
    if r == 0.0 {
        let xi0 = seq.eval(0)?;
        return Ok(LogAbsResult {
            value: xi0.norm().ln(),
            error_bound: 1e-15,
            precision_bits: p,
            terms_used: 1,
        });
    }

    // Tail budget shrinks with the working precision.
    let tail_eps = (-(p as f64 - 1.0) * std::f64::consts::LN_2).exp().max(1e-300);
    let degree = truncation_degree(r, tail_eps, seq.bound().max(1e-300));
    let xi = seq.eval_range(0, degree as i64)?;

    let (sin_t, cos_t) = Float::with_val(p, theta).sin_cos(Float::new(p));
    let rot = HpComplex::new(cos_t, sin_t);
    let r_hp = Float::with_val(p, r);

    let mut phase = HpComplex::from_f64(p, 1.0, 0.0);
    let mut scale = Float::with_val(p, -r).exp(); // e^{-r}
    let mut acc = HpComplex::zero(p);
    let mut total_abs = Float::new(64);
    let mut err = Float::new(64);
    let eps_p = Float::with_val(64, 2.0f64.powi(-(p as i32)));
    let xi_err = seq.eval_rel_error();

    for (n, z) in xi.iter().enumerate() {
        let zn = z.norm();
        if zn != 0.0 {
            let xi_hp = HpComplex::from_f64(p, z.re, z.im);
            let term = xi_hp.mul(&phase).mul_float(&scale);
            acc.add_assign(&term);
            let mag = Float::with_val(64, &scale) * zn;
            err += mag.clone() * (Float::with_val(64, 3 * n as u64 + 8) * &eps_p + xi_err);
            total_abs += mag;
        }
        if n < degree {
            phase = phase.mul(&rot);
            scale *= &r_hp;
            scale /= (n + 1) as u32;
        }
    }

    // Accumulation rounding plus the truncation tail.
    err += Float::with_val(64, degree as u64 + 1) * &eps_p * &total_abs;
    let tail = Float::with_val(64, seq.bound().max(1e-300)) * Float::with_val(64, tail_eps)
        / Float::with_val(64, (2.0 * std::f64::consts::PI * r).sqrt());
    err += tail;

    let acc_abs = acc.abs();
    if acc_abs.is_zero() && err.is_zero() {
        return Ok(LogAbsResult {
            value: f64::NEG_INFINITY,
            error_bound: 0.0,
            precision_bits: p,
            terms_used: degree + 1,
        });
    }
    let acc_abs_64 = Float::with_val(64, &acc_abs);
    if acc_abs_64 <= err {
        return Err(Error::Cancellation {
            bits: p,
            sum_abs: acc_abs_64.to_f64(),
            error_bound: err.to_f64(),
        });
    }

    let log_sum = acc_abs.ln();
    let value = r + log_sum.to_f64();
    // |d log s| <= err / (|s| - err), plus conversion slop.
    let rel = (err.clone() / (acc_abs_64 - &err)).to_f64();
    let error_bound = rel + 1e-15 * (value.abs() + 1.0);
    Ok(LogAbsResult { value, error_bound, precision_bits: p, terms_used: degree + 1 })
}

/// Doubling-precision driver: retries [`log_abs_f`] on cancellation until
/// `p_cap` (inclusive), surfacing the final cancellation when the cap is
/// reached. The result records the precision that succeeded.
pub fn log_abs_f_retry(
    seq: &MultiplierSequence,
    r: f64,
    theta: f64,
    p_start: u32,
    p_cap: u32,
) -> Result<LogAbsResult> {
    let mut p = p_start.max(64);
    loop {
        match log_abs_f(seq, r, theta, p) {
            Err(Error::Cancellation { .. }) if p < p_cap => p = (2 * p).min(p_cap),
            other => return other,
        }
    }
}

/// One row of an indicator profile.
#[derive(Clone, Copy, Debug)]
pub struct IndicatorPoint {
    pub r: f64,
    /// `log|F|/r`, the quantity approaching the supporting function.
    pub normalized: f64,
    /// Certified error on `normalized`.
    pub error_bound: f64,
}

/// Normalized radial profile `r -> log|F(r e^{i theta})|/r` along one ray.
pub fn indicator_estimate(
    seq: &MultiplierSequence,
    theta: f64,
    r_list: &[f64],
    p: u32,
) -> Result<Vec<IndicatorPoint>> {
    let mut out = Vec::with_capacity(r_list.len());
    for &r in r_list {
        if r <= 0.0 {
            return Err(Error::InvalidSequence("indicator radius must be positive".into()));
        }
        let la = log_abs_f(seq, r, theta, p)?;
        out.push(IndicatorPoint { r, normalized: la.value / r, error_bound: la.error_bound / r });
    }
    Ok(out)
}

/// Two-route consistency record: `|F(R e(theta))| / mu(R)` against `|W_R(theta)|`.
#[derive(Clone, Copy, Debug)]
pub struct Lemma3Record {
    pub lhs: f64,
    pub rhs: f64,
    pub discrepancy: f64,
}

/// Compares the normalized Taylor evaluation with the exponential sum at
/// integer radius `r`; `theta` in cycles.
pub fn lemma3_check(seq: &MultiplierSequence, r: u64, theta: f64, p: u32) -> Result<Lemma3Record> {
    let rf = r as f64;
    let la = log_abs_f_retry(seq, rf, 2.0 * std::f64::consts::PI * theta, p, 4096)?;
    let lhs = (la.value - mu_log(rf)).exp();
    let rhs = crate::expsums::w_r_direct(seq, r, theta, None)?.norm();
    Ok(Lemma3Record { lhs, rhs, discrepancy: (lhs - rhs).abs() })
}

#[cfg(test)]
mod tests;
