//! Deterministic per-index noise streams.
//!
//! Every random draw is a pure function of `(seed, stream, index)`, so
//! parallel realization over index blocks is bit-identical to serial
//! realization and repeated evaluation of the same descriptor agrees exactly.

/// SplitMix64 finalizer.
#[inline]
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A 64-bit word derived from `(seed, stream, index)`.
#[inline]
pub fn word(seed: u64, stream: u64, index: u64) -> u64 {
    splitmix(splitmix(seed ^ stream.wrapping_mul(0xa076_1d64_78bd_642f)) ^ index)
}

/// Uniform in `(0, 1]` (never zero, safe for logs).
#[inline]
pub fn uniform_open(seed: u64, stream: u64, index: u64) -> f64 {
    let w = word(seed, stream, index) >> 11; // 53 bits
    (w as f64 + 1.0) / 9_007_199_254_740_992.0
}

/// Uniform in `[-1, 1)`.
#[inline]
pub fn uniform_symmetric(seed: u64, stream: u64, index: u64) -> f64 {
    2.0 * ((word(seed, stream, index) >> 11) as f64 / 9_007_199_254_740_992.0) - 1.0
}

/// A fair sign in `{-1, +1}`.
#[inline]
pub fn sign(seed: u64, stream: u64, index: u64) -> f64 {
    if word(seed, stream, index) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Unbiased draw from `0..n` by rejection.
#[inline]
pub fn below(seed: u64, stream: u64, index: u64, n: u64) -> u64 {
    debug_assert!(n > 0);
    let zone = u64::MAX - (u64::MAX % n);
    let mut salt = 0u64;
    loop {
        let w = word(seed, stream ^ (salt << 32), index);
        if w < zone {
            return w % n;
        }
        salt += 1;
    }
}

/// Standard complex Gaussian: `E zeta = 0`, `E |zeta|^2 = 1`.
///
/// Box–Muller on two per-index uniforms; the pair `(g1, g2)/sqrt(2)` gives
/// independent real and imaginary parts of variance 1/2 each.
#[inline]
pub fn complex_gaussian(seed: u64, stream: u64, index: u64) -> (f64, f64) {
    let u1 = uniform_open(seed, stream, index);
    let u2 = uniform_open(seed, stream ^ 0x517c_c1b7_2722_0a95, index);
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
    (r * c / std::f64::consts::SQRT_2, r * s / std::f64::consts::SQRT_2)
}
