//! Multiplier-sequence families.
//!
//! A descriptor pins `(kind, params, seed)`; evaluation at any index is a
//! pure function of the descriptor, so realizations are reproducible and
//! cached buffers always agree with regeneration. Phase kinds reduce their
//! phases mod 1 at extended precision before the circular exponential is
//! applied: at index `n ~ 10^6` a quadratic or cubic phase has eaten most of
//! an f64 mantissa, and without the reduction every downstream Weyl-sum
//! experiment collapses into rounding noise.

mod noise;
mod stationary;
mod value;

pub use value::ExactReal;

use crate::num::{e, frac};
use crate::spectra::SpectralMeasure;
use crate::{Error, Result};
use num_complex::Complex64;
use rug::Float;
use serde::{Deserialize, Serialize};

/// Real polynomial `Q(x) = sum_{k=2}^{d} q_k x^k` (phases in cycles).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePolynomial {
    /// Coefficients `q_2, q_3, ..., q_d`.
    pub coefficients: Vec<ExactReal>,
}

impl PhasePolynomial {
    pub fn new(coefficients: Vec<ExactReal>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidSequence(
                "phase polynomial needs degree >= 2 (at least one coefficient q_2..)".into(),
            ));
        }
        Ok(PhasePolynomial { coefficients })
    }

    pub fn degree(&self) -> u32 {
        self.coefficients.len() as u32 + 1
    }

    pub fn has_irrational_coefficient(&self) -> bool {
        self.coefficients.iter().any(|c| c.is_irrational())
    }

    /// `Q(n)` at precision `prec`.
    pub(crate) fn eval(&self, n: u64, prec: u32) -> Float {
        let mut acc = Float::new(prec);
        let mut pw = Float::with_val(prec, n).square(); // n^2
        for (i, c) in self.coefficients.iter().enumerate() {
            if !c.is_zero() {
                acc += c.to_float(prec) * &pw;
            }
            if i + 1 < self.coefficients.len() {
                pw *= n;
            }
        }
        acc
    }

    pub(crate) fn magnitude_bits(&self, n: u64) -> f64 {
        let lg_n = ((n.max(2)) as f64).log2();
        let max_c = self
            .coefficients
            .iter()
            .map(|c| c.to_f64().abs().max(1.0))
            .fold(1.0f64, f64::max);
        (self.degree() as f64) * lg_n + max_c.log2() + (self.coefficients.len() as f64).log2() + 2.0
    }
}

/// Frequencies and amplitudes of a finite exponential sum
/// `xi(n) = sum_k c_k e^{i lambda_k n}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlmostPeriodicSpec {
    /// `(lambda_k, c_k)` with distinct angles in `(-pi, pi]`.
    pub pairs: Vec<(f64, (f64, f64))>,
}

impl AlmostPeriodicSpec {
    pub fn new(pairs: Vec<(f64, (f64, f64))>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidSequence("almost-periodic spec is empty".into()));
        }
        let mut angles: Vec<f64> = pairs.iter().map(|&(l, _)| crate::num::principal_angle(l)).collect();
        angles.sort_by(f64::total_cmp);
        for w in angles.windows(2) {
            if (w[0] - w[1]).abs() < 1e-12 {
                return Err(Error::InvalidSequence("duplicate almost-periodic frequencies".into()));
            }
        }
        Ok(AlmostPeriodicSpec { pairs })
    }

    /// Spectrum angles `lambda_k` with non-zero amplitude.
    pub fn spectrum_angles(&self) -> Vec<f64> {
        self.pairs
            .iter()
            .filter(|&&(_, (re, im))| re != 0.0 || im != 0.0)
            .map(|&(l, _)| l)
            .collect()
    }
}

/// Base distribution for the moving-average driving noise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaBase {
    /// Fair signs in `{-1, +1}`.
    SignSymmetric,
    /// Uniform on `[-1, 1)`.
    BoundedUniform,
}

/// Integer-valued stationary models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum IntegerModel {
    /// Deterministic periodic repetition of `pattern`.
    Pattern { pattern: Vec<i64> },
    /// I.i.d. uniform draws from `alphabet`.
    Iid { alphabet: Vec<i64> },
    /// Finite-state Markov chain over `outputs` with row-stochastic
    /// `transition`; realized up to `n_max`.
    Markov { outputs: Vec<i64>, transition: Vec<Vec<f64>>, n_max: usize },
}

/// How a literal coefficient list extends beyond its explicit values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiteralExtend {
    Cycle,
    Zero,
}

/// Descriptor of a multiplier-sequence family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SequenceKind {
    PolynomialPhase { q: PhasePolynomial },
    PowerPhase { beta: ExactReal },
    GaussianStationary { measure: SpectralMeasure, n_max: usize, seed: u64 },
    MovingAverage { kernel: Vec<f64>, base: MaBase, seed: u64 },
    AlmostPeriodic { spec: AlmostPeriodicSpec },
    IntegerModel { model: IntegerModel, seed: u64 },
    Literal { values: Vec<(f64, f64)>, extend: LiteralExtend },
}

/// A multiplier sequence `xi: Z_+ -> C` with deterministic evaluation.
#[derive(Clone, Debug)]
pub struct MultiplierSequence {
    kind: SequenceKind,
    /// Realized buffer for kinds whose evaluation is realization-based
    /// (Gaussian synthesis, Markov chains). `realized[n]` is `xi(n)`.
    realized: Option<Vec<Complex64>>,
    /// Declared bound `B` with `|xi(n)| <= B`; for Gaussian realizations the
    /// observed maximum modulus of the realization.
    bound: f64,
    /// Set when an integer power exponent was accepted as a negative control.
    integer_control: bool,
}

/// `xi(n) = e(Q(n))`, phases reduced mod 1 at extended precision.
pub fn polynomial_phase_seq(q: PhasePolynomial) -> Result<MultiplierSequence> {
    Ok(MultiplierSequence {
        kind: SequenceKind::PolynomialPhase { q },
        realized: None,
        bound: 1.0,
        integer_control: false,
    })
}

/// `xi(n) = e(n^beta)` for `beta > 1`.
///
/// Integer `beta` is accepted but flagged: it produces a non-equidistributed
/// phase and serves as a negative control.
pub fn power_phase_seq(beta: ExactReal) -> Result<MultiplierSequence> {
    if beta.to_f64() <= 1.0 {
        return Err(Error::InvalidSequence(format!("beta = {beta} must exceed 1")));
    }
    let integer_control = beta.is_integer();
    Ok(MultiplierSequence {
        kind: SequenceKind::PowerPhase { beta },
        realized: None,
        bound: 1.0,
        integer_control,
    })
}

/// Gaussian stationary realization with spectral measure `rho` on `0..=n_max`.
///
/// Atoms contribute `sqrt(a_j) zeta_j e^{i t_j n}` with independent standard
/// complex Gaussians `zeta_j`; the density part is synthesized on a uniform
/// frequency grid of at least `8 (n_max + 1)` midpoints with independent
/// complex Gaussian weights `sqrt(density * spacing)`.
pub fn gaussian_stationary_seq(
    rho: &SpectralMeasure,
    n_max: usize,
    seed: u64,
) -> Result<MultiplierSequence> {
    if rho.total_mass() <= 0.0 {
        return Err(Error::InvalidSpectrum("zero measure".into()));
    }
    let values = stationary::synthesize_gaussian(rho, n_max, seed);
    let bound = values.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    Ok(MultiplierSequence {
        kind: SequenceKind::GaussianStationary { measure: rho.clone(), n_max, seed },
        realized: Some(values),
        bound,
        integer_control: false,
    })
}

/// `(L+1)`-dependent moving average `xi(n) = sum_j kernel[j] eta(n - j)`.
pub fn moving_average_seq(kernel: Vec<f64>, base: MaBase, seed: u64) -> Result<MultiplierSequence> {
    if kernel.iter().all(|&k| k == 0.0) {
        return Err(Error::InvalidSequence("moving-average kernel is identically zero".into()));
    }
    let bound: f64 = kernel.iter().map(|k| k.abs()).sum();
    Ok(MultiplierSequence {
        kind: SequenceKind::MovingAverage { kernel, base, seed },
        realized: None,
        bound,
        integer_control: false,
    })
}

/// Finite exponential sum `xi(n) = sum_k c_k e^{i lambda_k n}`.
pub fn almost_periodic_seq(spec: AlmostPeriodicSpec) -> Result<MultiplierSequence> {
    let bound: f64 = spec.pairs.iter().map(|&(_, (re, im))| re.hypot(im)).sum();
    Ok(MultiplierSequence {
        kind: SequenceKind::AlmostPeriodic { spec },
        realized: None,
        bound,
        integer_control: false,
    })
}

/// Integer-valued stationary realization.
pub fn integer_stationary_seq(model: IntegerModel, seed: u64) -> Result<MultiplierSequence> {
    let (realized, bound) = match &model {
        IntegerModel::Pattern { pattern } => {
            if pattern.is_empty() {
                return Err(Error::InvalidSequence("empty pattern".into()));
            }
            let b = pattern.iter().map(|&v| v.abs() as f64).fold(0.0f64, f64::max);
            (None, b)
        }
        IntegerModel::Iid { alphabet } => {
            if alphabet.is_empty() {
                return Err(Error::InvalidSequence("empty alphabet".into()));
            }
            let b = alphabet.iter().map(|&v| v.abs() as f64).fold(0.0f64, f64::max);
            (None, b)
        }
        IntegerModel::Markov { outputs, transition, n_max } => {
            stationary::validate_markov(outputs, transition)?;
            let chain = stationary::realize_markov(outputs, transition, *n_max, seed);
            let b = outputs.iter().map(|&v| v.abs() as f64).fold(0.0f64, f64::max);
            (Some(chain.into_iter().map(|v| Complex64::new(v as f64, 0.0)).collect()), b)
        }
    };
    Ok(MultiplierSequence {
        kind: SequenceKind::IntegerModel { model, seed },
        realized,
        bound,
        integer_control: false,
    })
}

/// Literal coefficient list, cycled or zero-extended.
pub fn literal_seq(values: Vec<(f64, f64)>, extend: LiteralExtend) -> Result<MultiplierSequence> {
    if values.is_empty() {
        return Err(Error::InvalidSequence("empty literal".into()));
    }
    let bound = values.iter().map(|&(re, im)| re.hypot(im)).fold(0.0f64, f64::max);
    Ok(MultiplierSequence {
        kind: SequenceKind::Literal { values, extend },
        realized: None,
        bound,
        integer_control: false,
    })
}

/// `xi == 1` (so `F = e^z`).
pub fn constant_one() -> MultiplierSequence {
    literal_seq(vec![(1.0, 0.0)], LiteralExtend::Cycle).expect("non-empty")
}

/// `xi == 0`.
pub fn zero_seq() -> MultiplierSequence {
    literal_seq(vec![(0.0, 0.0)], LiteralExtend::Cycle).expect("non-empty")
}

/// `xi(n) = (-1)^n` (so `F = e^{-z}`).
pub fn alternating() -> MultiplierSequence {
    literal_seq(vec![(1.0, 0.0), (-1.0, 0.0)], LiteralExtend::Cycle).expect("non-empty")
}

/// `xi = 1, 0, 1, 0, ...` (so `F = cosh z`).
pub fn cosh_seq() -> MultiplierSequence {
    literal_seq(vec![(1.0, 0.0), (0.0, 0.0)], LiteralExtend::Cycle).expect("non-empty")
}

impl MultiplierSequence {
    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    /// Declared bound `B >= |xi(n)|` (observed maximum for Gaussian kinds).
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// True when an integer power exponent was accepted as a negative control.
    pub fn is_integer_control(&self) -> bool {
        self.integer_control
    }

    pub fn is_integer_valued(&self) -> bool {
        matches!(self.kind, SequenceKind::IntegerModel { .. })
    }

    /// Relative evaluation error of `xi(n)` as stored in an f64 pair.
    ///
    /// Realized and literal kinds are exact by definition (their f64 values
    /// are the sequence); phase kinds carry the mod-1 reduction and sin/cos
    /// rounding of the final double conversion.
    pub fn eval_rel_error(&self) -> f64 {
        match &self.kind {
            SequenceKind::PolynomialPhase { .. }
            | SequenceKind::PowerPhase { .. }
            | SequenceKind::AlmostPeriodic { .. } => 2.0f64.powi(-50),
            _ => 0.0,
        }
    }

    /// Largest evaluable index, if the kind is realization-bounded.
    pub fn max_index(&self) -> Option<i64> {
        match &self.kind {
            SequenceKind::GaussianStationary { n_max, .. } => Some(*n_max as i64),
            SequenceKind::IntegerModel { model: IntegerModel::Markov { n_max, .. }, .. } => {
                Some(*n_max as i64)
            }
            _ => None,
        }
    }

    /// `xi(n)` for `n >= 0`.
    pub fn eval(&self, n: i64) -> Result<Complex64> {
        if n < 0 {
            return Err(Error::IndexRange { index: n, lo: 0, hi: i64::MAX });
        }
        if let Some(buf) = &self.realized {
            return buf.get(n as usize).copied().ok_or(Error::IndexRange {
                index: n,
                lo: 0,
                hi: buf.len() as i64 - 1,
            });
        }
        let un = n as u64;
        Ok(match &self.kind {
            SequenceKind::PolynomialPhase { q } => {
                let prec = frac::prec_for_magnitude(q.magnitude_bits(un));
                e(frac::frac_to_f64(&q.eval(un, prec)))
            }
            SequenceKind::PowerPhase { beta } => e(power_phase_frac(beta, un)),
            SequenceKind::AlmostPeriodic { spec } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for &(lambda, (re, im)) in &spec.pairs {
                    acc += Complex64::new(re, im) * unit_phase(lambda, un);
                }
                acc
            }
            SequenceKind::MovingAverage { kernel, base, seed } => {
                stationary::moving_average_at(kernel, *base, *seed, n)
            }
            SequenceKind::IntegerModel { model, seed } => match model {
                IntegerModel::Pattern { pattern } => {
                    let v = pattern[(un as usize) % pattern.len()];
                    Complex64::new(v as f64, 0.0)
                }
                IntegerModel::Iid { alphabet } => {
                    let i = noise::below(*seed, stationary::STREAM_IID, un, alphabet.len() as u64);
                    Complex64::new(alphabet[i as usize] as f64, 0.0)
                }
                IntegerModel::Markov { .. } => unreachable!("markov kinds are realized"),
            },
            SequenceKind::Literal { values, extend } => {
                let i = un as usize;
                match extend {
                    LiteralExtend::Cycle => {
                        let (re, im) = values[i % values.len()];
                        Complex64::new(re, im)
                    }
                    LiteralExtend::Zero => values
                        .get(i)
                        .map(|&(re, im)| Complex64::new(re, im))
                        .unwrap_or(Complex64::new(0.0, 0.0)),
                }
            }
            SequenceKind::GaussianStationary { .. } => unreachable!("gaussian kinds are realized"),
        })
    }

    /// `xi(lo), ..., xi(hi)` inclusive.
    pub fn eval_range(&self, lo: i64, hi: i64) -> Result<Vec<Complex64>> {
        if lo > hi {
            return Ok(vec![]);
        }
        (lo..=hi).map(|n| self.eval(n)).collect()
    }

    /// Integer sample `xi(0), ..., xi(len-1)` for integer-valued kinds.
    pub fn integer_sample(&self, len: usize) -> Result<Vec<i64>> {
        if !self.is_integer_valued() {
            return Err(Error::InvalidSequence("not an integer-valued sequence kind".into()));
        }
        (0..len as i64).map(|n| self.eval(n).map(|z| z.re.round() as i64)).collect()
    }

    /// Windowed autocorrelation `(1/N) sum_{n=1}^{N} xi(n) conj(xi(n+m))`.
    pub fn autocovariance(&self, m: usize, window: usize) -> Result<Complex64> {
        let needed = window + m;
        if let Some(max) = self.max_index() {
            if (needed as i64) > max {
                return Err(Error::RealizationLength { needed, have: max as usize });
            }
        }
        let vals = self.eval_range(1, (window + m) as i64)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for n in 0..window {
            acc += vals[n] * vals[n + m].conj();
        }
        Ok(acc / window as f64)
    }
}

/// `frac(n^beta)` at a precision scaled to `beta log2 n + 64` bits.
pub(crate) fn power_phase_frac(beta: &ExactReal, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let bf = beta.to_f64();
    let prec = frac::prec_for_magnitude(bf * ((n.max(2)) as f64).log2());
    if let Some(rat) = beta.as_rational() {
        let (num, den) = (rat.numer(), rat.denom());
        if let (Some(p), Some(q)) = (num.to_u32(), den.to_u32()) {
            return frac::frac_to_f64(&frac::pow_rational(n, p, q, prec));
        }
    }
    // Irrational exponent: n^beta = exp(beta ln n).
    let ln_n = Float::with_val(prec, n).ln();
    let v = (beta.to_float(prec) * ln_n).exp();
    frac::frac_to_f64(&v)
}

/// `e^{i lambda n}` with the phase `lambda n / 2 pi` reduced at extended
/// precision for large `n`.
pub(crate) fn unit_phase(lambda: f64, n: u64) -> Complex64 {
    if n < (1 << 20) {
        let (s, c) = (lambda * n as f64).rem_euclid(2.0 * std::f64::consts::PI).sin_cos();
        Complex64::new(c, s)
    } else {
        let prec = frac::prec_for_magnitude((n as f64).log2() + 3.0);
        let t = Float::with_val(prec, lambda) * Float::with_val(prec, n);
        let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u32;
        let cycles = t / two_pi;
        e(frac::frac_to_f64(&cycles))
    }
}

#[cfg(test)]
mod tests;
