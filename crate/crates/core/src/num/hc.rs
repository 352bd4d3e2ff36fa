//! Minimal high-precision complex arithmetic on `rug::Float` pairs.

use rug::ops::CompleteRound;
use rug::Float;

/// Complex number with arbitrary-precision components.
#[derive(Clone, Debug)]
pub struct HpComplex {
    pub re: Float,
    pub im: Float,
}

impl HpComplex {
    pub fn zero(prec: u32) -> Self {
        Self { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn new(re: Float, im: Float) -> Self {
        Self { re, im }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Self { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn mul(&self, other: &HpComplex) -> HpComplex {
        let p = self.prec();
        let re = (&self.re * &other.re).complete(p) - (&self.im * &other.im).complete(p);
        let im = (&self.re * &other.im).complete(p) + (&self.im * &other.re).complete(p);
        HpComplex { re, im }
    }

    pub fn mul_float(&self, s: &Float) -> HpComplex {
        let p = self.prec();
        HpComplex { re: (&self.re * s).complete(p), im: (&self.im * s).complete(p) }
    }

    pub fn add_assign(&mut self, other: &HpComplex) {
        self.re += &other.re;
        self.im += &other.im;
    }

    /// Modulus at the component precision.
    pub fn abs(&self) -> Float {
        let p = self.prec();
        let rr = (&self.re * &self.re).complete(p);
        let ii = (&self.im * &self.im).complete(p);
        (rr + ii).sqrt()
    }
}
