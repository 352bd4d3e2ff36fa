//! Exact real coefficient values of the form `a + b*sqrt(r)`.
//!
//! Phase polynomials need coefficients that stay exact at any working
//! precision: a 53-bit decimal approximation of `sqrt(2)` is a rational
//! number and changes the arithmetic nature of the sequence. Values are kept
//! symbolically and rendered to `rug::Float` at the precision a given index
//! requires.

use crate::{Error, Result};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// `rational + coefficient * sqrt(radicand)`, radicand a non-negative integer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ExactReal {
    rational: Rational,
    sqrt_coef: Rational,
    radicand: u64,
}

impl ExactReal {
    pub fn zero() -> Self {
        Self::from_rational(Rational::new())
    }

    pub fn from_rational(rational: Rational) -> Self {
        ExactReal { rational, sqrt_coef: Rational::new(), radicand: 0 }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from(n))
    }

    pub fn ratio(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidSequence("zero denominator".into()));
        }
        Ok(Self::from_rational(Rational::from((num, den))))
    }

    pub fn sqrt_of(radicand: u64) -> Self {
        ExactReal { rational: Rational::new(), sqrt_coef: Rational::from(1), radicand }
    }

    fn radicand_is_square(&self) -> bool {
        let r = Integer::from(self.radicand);
        r.is_perfect_square()
    }

    /// True when the value is provably irrational (a genuine sqrt part).
    pub fn is_irrational(&self) -> bool {
        self.sqrt_coef != 0 && self.radicand != 0 && !self.radicand_is_square()
    }

    pub fn is_zero(&self) -> bool {
        self.rational == 0 && (self.sqrt_coef == 0 || self.radicand == 0)
    }

    /// Exact rational content, if the value is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.sqrt_coef == 0 || self.radicand == 0 {
            return Some(self.rational.clone());
        }
        if self.radicand_is_square() {
            let root = Integer::from(self.radicand).sqrt();
            return Some(self.rational.clone() + self.sqrt_coef.clone() * root);
        }
        None
    }

    pub fn is_integer(&self) -> bool {
        self.as_rational().map(|r| r.is_integer()).unwrap_or(false)
    }

    /// Render at `prec` bits.
    pub fn to_float(&self, prec: u32) -> Float {
        let mut v = Float::with_val(prec, &self.rational);
        if self.sqrt_coef != 0 && self.radicand != 0 {
            let root = Float::with_val(prec, self.radicand).sqrt();
            v += Float::with_val(prec, &self.sqrt_coef) * root;
        }
        v
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float(64).to_f64()
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = |t: &str| Error::InvalidSequence(format!("cannot parse number `{t}`"));
    if let Some((num, den)) = s.split_once('/') {
        let n = Integer::from_str(num.trim()).map_err(|_| bad(s))?;
        let d = Integer::from_str(den.trim()).map_err(|_| bad(s))?;
        if d == 0 {
            return Err(bad(s));
        }
        return Ok(Rational::from((n, d)));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.trim_start().starts_with('-');
        let i = if int_part.is_empty() || int_part == "-" {
            Integer::new()
        } else {
            Integer::from_str(int_part).map_err(|_| bad(s))?
        };
        if !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad(s));
        }
        let scale = Integer::from(10).pow(frac_part.len() as u32);
        let f = if frac_part.is_empty() {
            Integer::new()
        } else {
            Integer::from_str(frac_part).map_err(|_| bad(s))?
        };
        let signed_f = if neg { -f } else { f };
        return Ok(Rational::from((i * scale.clone() + signed_f, scale)));
    }
    Integer::from_str(s).map(Rational::from).map_err(|_| bad(s))
}

impl FromStr for ExactReal {
    type Err = Error;

    /// Accepts `3`, `-1/2`, `0.25`, `sqrt(2)`, `-sqrt(5)`, `3/4*sqrt(2)`,
    /// and `sqrt(2)/3`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(idx) = s.find("sqrt(") {
            let close = s[idx..]
                .find(')')
                .map(|c| idx + c)
                .ok_or_else(|| Error::InvalidSequence(format!("unclosed sqrt in `{s}`")))?;
            let radicand: u64 = s[idx + 5..close]
                .trim()
                .parse()
                .map_err(|_| Error::InvalidSequence(format!("bad radicand in `{s}`")))?;
            let before = s[..idx].trim();
            let after = s[close + 1..].trim();
            let mut coef = if before.is_empty() {
                Rational::from(1)
            } else if before == "-" {
                Rational::from(-1)
            } else {
                let b = before
                    .strip_suffix('*')
                    .ok_or_else(|| Error::InvalidSequence(format!("expected `*` before sqrt in `{s}`")))?;
                parse_rational(b)?
            };
            if !after.is_empty() {
                let d = after
                    .strip_prefix('/')
                    .ok_or_else(|| Error::InvalidSequence(format!("unexpected trailing `{after}`")))?;
                let den = parse_rational(d)?;
                if den == 0 {
                    return Err(Error::InvalidSequence("zero denominator".into()));
                }
                coef /= den;
            }
            Ok(ExactReal { rational: Rational::new(), sqrt_coef: coef, radicand })
        } else {
            Ok(Self::from_rational(parse_rational(s)?))
        }
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sqrt_coef == 0 || self.radicand == 0 {
            return write!(f, "{}", self.rational);
        }
        if self.rational != 0 {
            write!(f, "{} + ", self.rational)?;
        }
        if self.sqrt_coef == 1 {
            write!(f, "sqrt({})", self.radicand)
        } else {
            write!(f, "{}*sqrt({})", self.sqrt_coef, self.radicand)
        }
    }
}

impl TryFrom<String> for ExactReal {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ExactReal> for String {
    fn from(v: ExactReal) -> String {
        v.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        assert_eq!("3".parse::<ExactReal>().unwrap().to_f64(), 3.0);
        assert_eq!("-1/2".parse::<ExactReal>().unwrap().to_f64(), -0.5);
        assert_eq!("0.25".parse::<ExactReal>().unwrap().to_f64(), 0.25);
        assert_eq!("-0.5".parse::<ExactReal>().unwrap().to_f64(), -0.5);
        let s2 = "sqrt(2)".parse::<ExactReal>().unwrap();
        assert!((s2.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(s2.is_irrational());
        let h = "3/4*sqrt(2)".parse::<ExactReal>().unwrap();
        assert!((h.to_f64() - 0.75 * std::f64::consts::SQRT_2).abs() < 1e-15);
        let t = "sqrt(2)/3".parse::<ExactReal>().unwrap();
        assert!((t.to_f64() - std::f64::consts::SQRT_2 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn square_radicand_is_rational() {
        let v = "sqrt(9)".parse::<ExactReal>().unwrap();
        assert!(!v.is_irrational());
        assert_eq!(v.as_rational().unwrap(), Rational::from(3));
    }

    #[test]
    fn beta_three_halves() {
        let b = "3/2".parse::<ExactReal>().unwrap();
        assert!(!b.is_integer());
        assert_eq!(b.as_rational().unwrap(), Rational::from((3, 2)));
    }

    #[test]
    fn roundtrips_through_display() {
        for s in ["3", "-1/2", "sqrt(2)", "3/4*sqrt(2)"] {
            let v: ExactReal = s.parse().unwrap();
            let w: ExactReal = v.to_string().parse().unwrap();
            assert_eq!(v, w);
        }
    }
}
