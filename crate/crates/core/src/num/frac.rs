//! High-precision fractional parts of phases.
//!
//! Phases like `q n^2` or `n^{3/2}` reach magnitudes of 10^9 and beyond, so
//! the integer part eats most of an f64 mantissa; the fractional part, which
//! is all that matters for `e(.)`, must be extracted at extended precision
//! before any trigonometry happens.

use rug::ops::Pow;
use rug::{Float, Integer};

/// Fractional part of `x` mapped into `[0, 1)`, returned as f64.
pub fn frac_to_f64(x: &Float) -> f64 {
    let fl = Float::with_val(x.prec(), x.floor_ref());
    let frac = Float::with_val(x.prec(), x - &fl);
    let mut v = frac.to_f64();
    // Guard against rounding to exactly 1.0 on conversion.
    if v >= 1.0 {
        v -= 1.0;
    }
    if v < 0.0 {
        v += 1.0;
    }
    v
}

/// Bits required so that `frac(x)` keeps ~64 significant bits when
/// `|x| <= 2^magnitude_bits`.
pub fn prec_for_magnitude(magnitude_bits: f64) -> u32 {
    let m = magnitude_bits.max(0.0).ceil() as u32;
    (m + 96).max(128)
}

/// `n^{p/q}` at precision `prec`, exact integer-root based.
///
/// Computes the `q`-th root of the exact integer `n^p`, so no rounding enters
/// before the final float truncation.
pub fn pow_rational(n: u64, p: u32, q: u32, prec: u32) -> Float {
    assert!(q > 0, "rational exponent with zero denominator");
    let big = Integer::from(n).pow(p);
    let f = Float::with_val(prec, big);
    if q == 1 {
        f
    } else {
        f.root(q)
    }
}

/// `sqrt(num/den)` at precision `prec`.
pub fn sqrt_rational(num: u64, den: u64, prec: u32) -> Float {
    assert!(den > 0);
    let f = Float::with_val(prec, num) / Float::with_val(prec, den);
    f.sqrt()
}
