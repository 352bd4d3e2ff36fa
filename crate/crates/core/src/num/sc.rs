//! Exponent-offset complex numbers.
//!
//! A value is `(re + i im) * 2^exp` with the mantissa kept near unit
//! magnitude. Taylor-section coefficients span thousands of binary orders of
//! magnitude, far beyond the f64 exponent range, so polynomial evaluation and
//! root iteration run on this representation; only ratios (which cancel the
//! offsets) are collapsed back to plain complex doubles.

use num_complex::Complex64;

const REBALANCE_ABOVE: f64 = 1e120;
const REBALANCE_BELOW: f64 = 1e-120;
const SHIFT: i64 = 400;
const SCALE_UP: f64 = 2.582249878086909e120; // 2^400
const SCALE_DOWN: f64 = 1.0 / SCALE_UP;

/// Complex number with an explicit power-of-two offset.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sc {
    pub re: f64,
    pub im: f64,
    pub exp: i64,
}

impl Sc {
    pub const ZERO: Sc = Sc { re: 0.0, im: 0.0, exp: 0 };

    #[inline]
    pub fn from_c64(z: Complex64) -> Self {
        Sc { re: z.re, im: z.im, exp: 0 }.rebalanced()
    }

    /// Build `unit * 2^exp2 * 2^resid_log2` from a unit-scale complex factor
    /// and a (possibly huge) base-2 logarithm split by the caller.
    pub fn from_mantissa_exp(mantissa: Complex64, exp: i64) -> Self {
        Sc { re: mantissa.re, im: mantissa.im, exp }.rebalanced()
    }

    /// Build from a natural-log scale: `unit * e^{ln_scale}`.
    pub fn from_log_scale(unit: Complex64, ln_scale: f64) -> Self {
        let log2_scale = ln_scale / std::f64::consts::LN_2;
        let e = log2_scale.floor();
        let resid = log2_scale - e; // in [0, 1)
        let m = resid.exp2();
        Sc { re: unit.re * m, im: unit.im * m, exp: e as i64 }.rebalanced()
    }

    #[inline]
    fn rebalanced(mut self) -> Self {
        let m = self.re.abs().max(self.im.abs());
        if m == 0.0 {
            self.exp = 0;
            return self;
        }
        let mut s = self;
        let mut mag = m;
        while mag > REBALANCE_ABOVE {
            s.re *= SCALE_DOWN;
            s.im *= SCALE_DOWN;
            s.exp += SHIFT;
            mag *= SCALE_DOWN;
        }
        while mag < REBALANCE_BELOW {
            s.re *= SCALE_UP;
            s.im *= SCALE_UP;
            s.exp -= SHIFT;
            mag *= SCALE_UP;
        }
        s
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    #[inline]
    pub fn mul_c64(&self, w: Complex64) -> Sc {
        Sc {
            re: self.re * w.re - self.im * w.im,
            im: self.re * w.im + self.im * w.re,
            exp: self.exp,
        }
        .rebalanced()
    }

    #[inline]
    pub fn add(&self, other: &Sc) -> Sc {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let d = hi.exp - lo.exp;
        if d > 140 {
            return *hi;
        }
        let f = (-(d as f64)).exp2();
        Sc { re: hi.re + lo.re * f, im: hi.im + lo.im * f, exp: hi.exp }.rebalanced()
    }

    /// Natural log of the modulus; `-inf` for zero.
    pub fn log_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.re.hypot(self.im).ln() + (self.exp as f64) * std::f64::consts::LN_2
    }

    pub fn arg(&self) -> f64 {
        self.im.atan2(self.re)
    }

    /// `self / other` as a plain complex double; offsets cancel.
    pub fn ratio(&self, other: &Sc) -> Complex64 {
        let num = Complex64::new(self.re, self.im);
        let den = Complex64::new(other.re, other.im);
        let d = (self.exp - other.exp) as f64;
        let q = num / den;
        if d == 0.0 {
            q
        } else {
            q * d.exp2()
        }
    }

    /// Collapse to a plain complex double (saturating on overflow/underflow).
    pub fn to_c64(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let e = self.exp as f64;
        if e > 1000.0 {
            let s = Complex64::new(self.re, self.im);
            return s / s.norm() * f64::INFINITY;
        }
        if e < -1060.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(self.re, self.im) * e.exp2()
    }
}

/// Horner evaluation of `sum_n coeffs[n] w^n`.
pub fn horner(coeffs: &[Sc], w: Complex64) -> Sc {
    let mut acc = Sc::ZERO;
    for c in coeffs.iter().rev() {
        acc = acc.mul_c64(w).add(c);
    }
    acc
}

/// Simultaneous Horner for value and derivative.
pub fn horner_with_derivative(coeffs: &[Sc], w: Complex64) -> (Sc, Sc) {
    let mut p = Sc::ZERO;
    let mut dp = Sc::ZERO;
    for c in coeffs.iter().rev() {
        dp = dp.mul_c64(w).add(&p);
        p = p.mul_c64(w).add(c);
    }
    (p, dp)
}
