//! Zeros of truncated Taylor sections: location by simultaneous iteration,
//! counting by the argument principle, angular histograms against spectral
//! predictions, reciprocal sums, and the `log|F(tz)|/t` convergence
//! diagnostic.
//!
//! All angles in this module are radians in `(-pi, pi]`.

pub mod roots;

use crate::num::sc::{horner, Sc};
use crate::num::{e as circ, principal_angle};
use crate::sequences::MultiplierSequence;
use crate::spectra::AngularDensity;
use crate::{Error, Result};
use num_complex::Complex64;
use roots::{newton_polish, RootMethod};
use rug::Float;

/// Smallest `D = r + k sqrt(r)` (integer `k >= 1`) whose geometric tail
/// majorant satisfies `sum_{n > D} B r^n / n! <= eps e^r / sqrt(2 pi r)`.
pub fn truncation_degree(r: f64, eps: f64, bound: f64) -> usize {
    let r = r.max(1.0);
    let sqrt_r = r.sqrt();
    let target = eps.ln() + r - 0.5 * (2.0 * std::f64::consts::PI * r).ln() - bound.ln();
    let mut k = 1u32;
    loop {
        let d = (r + k as f64 * sqrt_r).ceil();
        // tail <= (r^D / D!) q/(1-q), q = r/(D+1)
        let q = r / (d + 1.0);
        let ln_tail = d * r.ln() - Float::with_val(64, d + 1.0).ln_gamma().to_f64()
            + (q / (1.0 - q)).ln();
        if ln_tail <= target || k > 400 {
            return d as usize;
        }
        k += 1;
    }
}

/// The scaled section `P(w) = sum_{n <= D} xi(n) e^{s_n} w^n` with
/// `s_n = n ln r - lnGamma(n+1) - r`, i.e. `P(w) ~ F(r w) e^{-r}`.
#[derive(Clone, Debug)]
pub struct ScaledSection {
    pub r: f64,
    pub coeffs: Vec<Sc>,
    /// `ln |coeffs[n]|` (`-inf` for vanishing entries).
    pub ln_abs: Vec<f64>,
}

impl ScaledSection {
    pub fn build(seq: &MultiplierSequence, r: f64, degree: usize) -> Result<Self> {
        let xi = seq.eval_range(0, degree as i64)?;
        let prec = 96u32;
        let ln_r = Float::with_val(prec, r).ln();
        let mut coeffs = Vec::with_capacity(degree + 1);
        let mut ln_abs = Vec::with_capacity(degree + 1);
        for (n, z) in xi.iter().enumerate() {
            if z.re == 0.0 && z.im == 0.0 {
                coeffs.push(Sc::ZERO);
                ln_abs.push(f64::NEG_INFINITY);
                continue;
            }
            let s = Float::with_val(prec, n) * &ln_r
                - Float::with_val(prec, n as f64 + 1.0).ln_gamma()
                - Float::with_val(prec, r);
            let c = Sc::from_log_scale(*z, s.to_f64());
            ln_abs.push(c.log_abs());
            coeffs.push(c);
        }
        Ok(ScaledSection { r, coeffs, ln_abs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, w: Complex64) -> Sc {
        horner(&self.coeffs, w)
    }

    /// `ln max_n |c_n w^n|`, the local term scale at `w`.
    pub fn ln_term_scale(&self, w: Complex64) -> f64 {
        let ln_w = w.norm().ln();
        self.ln_abs
            .iter()
            .enumerate()
            .map(|(n, &la)| la + n as f64 * ln_w)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Residual of `w` relative to the local term scale.
    pub fn relative_residual(&self, w: Complex64) -> f64 {
        let v = self.eval(w);
        (v.log_abs() - self.ln_term_scale(w)).exp()
    }
}

/// `|P(w)|` below this multiple of the local term scale is treated as a
/// contour hit on a zero.
const CONTOUR_ZERO_TOL: f64 = 1e-12;
/// Residual validation threshold for located zeros.
const RESIDUAL_TOL: f64 = 1e-6;

struct ContourHit;

/// Accumulated argument change of `P` along `t -> wfun(t)`, `t` in `[a, b]`.
/// Bisects until each step turns by less than `pi/4`.
fn delta_arg(
    section: &ScaledSection,
    wfun: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    initial_steps: usize,
) -> std::result::Result<f64, ContourHit> {
    let probe = |t: f64| -> std::result::Result<(f64, f64), ContourHit> {
        let w = wfun(t);
        let v = section.eval(w);
        let la = v.log_abs();
        if la - section.ln_term_scale(w) < CONTOUR_ZERO_TOL.ln() {
            return Err(ContourHit);
        }
        Ok((v.arg(), la))
    };

    fn refine(
        probe: &dyn Fn(f64) -> std::result::Result<(f64, f64), ContourHit>,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        depth: u32,
    ) -> std::result::Result<f64, ContourHit> {
        let d = principal_angle(fb - fa);
        if d.abs() <= std::f64::consts::FRAC_PI_4 || depth == 0 {
            return Ok(d);
        }
        let m = 0.5 * (a + b);
        if m == a || m == b {
            return Ok(d);
        }
        let (fm, _) = probe(m)?;
        Ok(refine(probe, a, fa, m, fm, depth - 1)? + refine(probe, m, fm, b, fb, depth - 1)?)
    }

    let steps = initial_steps.max(8);
    let mut total = 0.0;
    let mut prev = probe(a)?;
    let mut t_prev = a;
    for i in 1..=steps {
        let t = a + (b - a) * i as f64 / steps as f64;
        let cur = probe(t)?;
        total += refine(&probe, t_prev, prev.0, t, cur.0, 36)?;
        prev = cur;
        t_prev = t;
    }
    Ok(total)
}

/// Winding number of the section along `|w| = radius` (counts all zeros of
/// the section with modulus below `radius`, origin included).
fn winding_circle(section: &ScaledSection, radius: f64) -> std::result::Result<i64, ContourHit> {
    let steps = (8.0 * section.r * radius).ceil() as usize + 32;
    let total = delta_arg(
        section,
        &|t: f64| Complex64::from_polar(radius, -std::f64::consts::PI + 2.0 * std::f64::consts::PI * t),
        0.0,
        1.0,
        steps,
    )?;
    let w = total / (2.0 * std::f64::consts::PI);
    Ok(w.round() as i64)
}

/// Winding of the sector contour `theta1 <= arg w <= theta2`,
/// `rho0 <= |w| <= radius`; origin zeros are excluded by the inner arc.
fn winding_sector(
    section: &ScaledSection,
    radius: f64,
    theta1: f64,
    theta2: f64,
) -> std::result::Result<i64, ContourHit> {
    let rho0 = 1e-9;
    let arc_steps = (8.0 * section.r * (theta2 - theta1).abs()).ceil() as usize + 32;
    let mut total = 0.0;
    // Outward radial at theta1.
    total += delta_arg(
        section,
        &|t: f64| Complex64::from_polar(rho0 + (radius - rho0) * t, theta1),
        0.0,
        1.0,
        64,
    )?;
    // Outer arc theta1 -> theta2.
    total += delta_arg(
        section,
        &|t: f64| Complex64::from_polar(radius, theta1 + (theta2 - theta1) * t),
        0.0,
        1.0,
        arc_steps,
    )?;
    // Inward radial at theta2.
    total += delta_arg(
        section,
        &|t: f64| Complex64::from_polar(radius + (rho0 - radius) * t, theta2),
        0.0,
        1.0,
        64,
    )?;
    // Inner arc theta2 -> theta1.
    total += delta_arg(
        section,
        &|t: f64| Complex64::from_polar(rho0, theta2 + (theta1 - theta2) * t),
        0.0,
        1.0,
        32,
    )?;
    Ok((total / (2.0 * std::f64::consts::PI)).round() as i64)
}

/// One validated zero of the section, in `z = r w` coordinates.
#[derive(Clone, Copy, Debug)]
pub struct ZeroRecord {
    pub location: Complex64,
    /// `|P(w)|` relative to the local term scale.
    pub residual: f64,
}

/// Zeros of the truncated Taylor section inside `|z| <= r`.
#[derive(Clone, Debug)]
pub struct ZeroSet {
    pub radius: f64,
    pub degree: usize,
    pub method: RootMethod,
    pub zeros: Vec<ZeroRecord>,
    /// Zeros at the origin (`xi(0) = ... = 0` case).
    pub origin_multiplicity: usize,
}

impl ZeroSet {
    /// Total count including origin multiplicity.
    pub fn count(&self) -> usize {
        self.zeros.len() + self.origin_multiplicity
    }
}

const DEGREE_CAP: usize = 4000;

/// Locates and validates all zeros of the degree-`D` section in the disk of
/// radius `r`, `D = truncation_degree(r, 1e-2 * f64::EPSILON, B)`.
///
/// Every candidate is Newton-polished, kept only when its residual clears
/// the validation threshold, and the final count is cross-checked against
/// the winding number on `|z| = r`; zeros hugging the boundary get a local
/// winding check so that truncation artifacts cannot sneak in.
pub fn zeros_in_disk(seq: &MultiplierSequence, r: f64, _precision: u32) -> Result<ZeroSet> {
    let degree = truncation_degree(r, 1e-2 * f64::EPSILON, seq.bound().max(1e-300));
    if degree > DEGREE_CAP {
        return Err(Error::RootFinding(format!(
            "section degree {degree} above the {DEGREE_CAP} cap (radius {r})"
        )));
    }
    let section = ScaledSection::build(seq, r, degree)?;
    let outcome = roots::all_roots(&section.coeffs)?;

    // The argument-principle count may need a perturbed contour radius; the
    // same radius then decides which roots are kept as inside.
    let mut keep_radius = 1.0;
    let mut winding = None;
    for k in 0..=8 {
        keep_radius = 1.0 + 1e-6 * k as f64;
        match winding_circle(&section, keep_radius) {
            Ok(w) => {
                winding = Some(w);
                break;
            }
            Err(ContourHit) => continue,
        }
    }
    let winding = winding.ok_or(Error::BoundaryZero { r })?;

    let mut zeros = Vec::new();
    for root in outcome.roots {
        if root.norm() > keep_radius + 1e-9 {
            continue;
        }
        let polished = newton_polish(&section.coeffs, root, 3);
        let w = if polished.norm() <= keep_radius { polished } else { root };
        if w.norm() > keep_radius {
            continue;
        }
        let residual = section.relative_residual(w);
        if !(residual <= RESIDUAL_TOL) {
            return Err(Error::RootFinding(format!(
                "zero at w={w} failed residual validation: {residual:e}"
            )));
        }
        // Boundary-hugging zeros: confirm by a local argument-principle disk.
        if w.norm() > 0.98 {
            let local = local_winding(&section, w, 5e-4)?;
            if local < 1 {
                return Err(Error::RootFinding(format!(
                    "boundary zero at w={w} not confirmed by local winding"
                )));
            }
        }
        zeros.push(ZeroRecord { location: w * r, residual });
    }

    let located = zeros.len() as i64 + outcome.origin_multiplicity as i64;
    if located != winding {
        return Err(Error::CountMismatch { located: located as usize, winding });
    }
    zeros.sort_by(|a, b| {
        a.location
            .arg()
            .total_cmp(&b.location.arg())
            .then(a.location.norm().total_cmp(&b.location.norm()))
    });
    Ok(ZeroSet {
        radius: r,
        degree,
        method: outcome.method,
        zeros,
        origin_multiplicity: outcome.origin_multiplicity,
    })
}

fn local_winding(section: &ScaledSection, center: Complex64, radius: f64) -> Result<i64> {
    for k in 0..=8 {
        let rho = radius * (1.0 + 0.37 * k as f64);
        let res = delta_arg(
            section,
            &|t: f64| center + Complex64::from_polar(rho, 2.0 * std::f64::consts::PI * t),
            0.0,
            1.0,
            64,
        );
        match res {
            Ok(total) => return Ok((total / (2.0 * std::f64::consts::PI)).round() as i64),
            Err(ContourHit) => continue,
        }
    }
    Err(Error::BoundaryZero { r: section.r })
}

/// Zero count of the closed sector `theta1 <= arg z < theta2`, `|z| <= r`,
/// by adaptive phase tracking along the sector boundary.
///
/// Zeros at the origin are excluded unless the sector is the full circle.
pub fn sector_count(
    seq: &MultiplierSequence,
    r: f64,
    theta1: f64,
    theta2: f64,
    _precision: u32,
) -> Result<i64> {
    if !(theta2 > theta1) || theta2 - theta1 > 2.0 * std::f64::consts::PI + 1e-12 {
        return Err(Error::InvalidSpectrum("need theta1 < theta2 <= theta1 + 2 pi".into()));
    }
    let degree = truncation_degree(r, 1e-2 * f64::EPSILON, seq.bound().max(1e-300));
    if degree > DEGREE_CAP {
        return Err(Error::RootFinding(format!("section degree {degree} above cap")));
    }
    let section = ScaledSection::build(seq, r, degree)?;
    let full = (theta2 - theta1 - 2.0 * std::f64::consts::PI).abs() < 1e-12;
    for k in 0..=8 {
        let radius = 1.0 + 1e-6 * k as f64;
        let res = if full {
            winding_circle(&section, radius)
        } else {
            winding_sector(&section, radius, theta1, theta2)
        };
        match res {
            Ok(w) => return Ok(w),
            Err(ContourHit) => continue,
        }
    }
    Err(Error::BoundaryZero { r })
}

/// Observed-versus-predicted sector count.
#[derive(Clone, Copy, Debug)]
pub struct SectorCountRecord {
    pub r: f64,
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub observed: usize,
    pub predicted: f64,
    pub deviation: f64,
}

/// Bins the zeros of `zs` into `bins` equal sectors and pairs each count
/// with the spectral prediction. Bin edges that collide with atoms of the
/// density are rotated by half a bin.
pub fn angular_histogram(
    zs: &ZeroSet,
    density: &AngularDensity,
    bins: usize,
) -> Result<Vec<SectorCountRecord>> {
    if bins == 0 {
        return Err(Error::InvalidSpectrum("need at least one bin".into()));
    }
    let width = 2.0 * std::f64::consts::PI / bins as f64;
    let mut offset = 0.0;
    let collides = |off: f64| {
        (0..bins).any(|k| {
            let edge = -std::f64::consts::PI + k as f64 * width + off;
            density.has_atom_near(edge, 1e-9)
        })
    };
    if collides(offset) {
        offset = 0.5 * width;
    }
    let mut records = Vec::with_capacity(bins);
    for k in 0..bins {
        let lo = -std::f64::consts::PI + k as f64 * width + offset;
        let hi = lo + width;
        let observed = zs
            .zeros
            .iter()
            .filter(|z| {
                let mut a = z.location.arg() - lo;
                a -= (a / (2.0 * std::f64::consts::PI)).floor() * 2.0 * std::f64::consts::PI;
                a < width
            })
            .count();
        let predicted = density.mass_between(lo, hi) * zs.radius / (2.0 * std::f64::consts::PI);
        records.push(SectorCountRecord {
            r: zs.radius,
            theta_lo: lo,
            theta_hi: hi,
            observed,
            predicted,
            deviation: observed as f64 - predicted,
        });
    }
    Ok(records)
}

/// Reciprocal sum over the located zeros.
#[derive(Clone, Copy, Debug)]
pub struct LindelofSum {
    pub value: Complex64,
    /// Origin zeros cannot enter the sum; their multiplicity is surfaced.
    pub origin_zeros_excluded: usize,
}

/// `sum 1/z_n` over the validated zeros of `zs`.
pub fn lindelof_sum(zs: &ZeroSet) -> LindelofSum {
    let mut acc = Complex64::new(0.0, 0.0);
    for z in &zs.zeros {
        acc += 1.0 / z.location;
    }
    LindelofSum { value: acc, origin_zeros_excluded: zs.origin_multiplicity }
}

/// One scale of the `log|F(tz)|/t` diagnostic.
#[derive(Clone, Copy, Debug)]
pub struct L1locRow {
    pub t: f64,
    /// Mean over the grid of `| log|F(tz)|/t - H(z) |`.
    pub discrepancy: f64,
    /// Grid cells that still flagged cancellation at the precision cap and
    /// entered through the capped floor value.
    pub flagged_cells: usize,
}

/// Mean deviation of `log|F(tz)|/t` from the Minkowski functional over a
/// polar grid on the annulus `r0 <= |z| <= r1`, for each scale in `t_list`.
#[allow(clippy::too_many_arguments)]
pub fn l1loc_diagnostic(
    seq: &MultiplierSequence,
    t_list: &[f64],
    sigma: &crate::spectra::SpectrumSet,
    annulus: (f64, f64),
    grid: (usize, usize),
    p_start: u32,
    p_cap: u32,
) -> Result<Vec<L1locRow>> {
    let (r0, r1) = annulus;
    if !(r0 > 0.0 && r1 > r0) {
        return Err(Error::InvalidSpectrum(format!("bad annulus ({r0}, {r1})")));
    }
    let (n_r, n_theta) = grid;
    if n_r == 0 || n_theta == 0 {
        return Err(Error::InvalidSpectrum("empty diagnostic grid".into()));
    }
    if t_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSpectrum("t_list must be increasing".into()));
    }
    let mut out = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let mut acc = 0.0;
        let mut flagged = 0usize;
        for i in 0..n_r {
            let rho = r0 + (r1 - r0) * (i as f64 + 0.5) / n_r as f64;
            for j in 0..n_theta {
                let phi = -std::f64::consts::PI
                    + 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / n_theta as f64;
                let h = rho * sigma.supporting_function(phi);
                let value = match crate::entire::log_abs_f_retry(seq, t * rho, phi, p_start, p_cap)
                {
                    Ok(la) => la.value,
                    Err(Error::Cancellation { .. }) => {
                        flagged += 1;
                        // Precision floor: log|F| is below anything resolvable
                        // at p_cap bits relative to the term scale e^{t rho}.
                        t * rho - (p_cap as f64) * std::f64::consts::LN_2
                    }
                    Err(e) => return Err(e),
                };
                acc += (value / t - h).abs();
            }
        }
        out.push(L1locRow {
            t,
            discrepancy: acc / (n_r * n_theta) as f64,
            flagged_cells: flagged,
        });
    }
    Ok(out)
}

/// Rotates every multiplier by `e^{i n phi}` (zero rotation covariance
/// checks); exposed for tests and experiments.
pub fn rotate_sequence(
    seq: &MultiplierSequence,
    phi: f64,
    up_to: i64,
) -> Result<MultiplierSequence> {
    let values = seq.eval_range(0, up_to)?;
    let rotated: Vec<(f64, f64)> = values
        .iter()
        .enumerate()
        .map(|(n, z)| {
            let w = z * circ(phi * n as f64 / (2.0 * std::f64::consts::PI));
            (w.re, w.im)
        })
        .collect();
    crate::sequences::literal_seq(rotated, crate::sequences::LiteralExtend::Zero)
}
