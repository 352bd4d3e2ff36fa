//! Numeric support: circular exponentials, compensated summation,
//! exponent-offset complex arithmetic, high-precision fractional parts,
//! and adaptive quadrature.

pub mod frac;
pub mod hc;
pub mod kahan;
pub mod quad;
pub mod sc;

use num_complex::Complex64;

/// The circular exponential `e(t) = exp(2 pi i t)`, `t` in cycles.
#[inline]
pub fn e(t: f64) -> Complex64 {
    let (s, c) = (2.0 * std::f64::consts::PI * t).sin_cos();
    Complex64::new(c, s)
}

/// Reduce an angle to the principal range `(-pi, pi]`.
pub fn principal_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut t = theta.rem_euclid(two_pi);
    if t > std::f64::consts::PI {
        t -= two_pi;
    }
    t
}

/// `log(e^a + e^b)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}
