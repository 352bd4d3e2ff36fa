//! Spectra on the unit circle and the quantities they predict.
//!
//! A spectrum is a closed subset of the circle given by finitely many arcs
//! and isolated points. Its supporting function `h(theta) = max_t cos(theta - t)`
//! determines the angular zero-density measure `ds = (h'' + h) dtheta`: unit
//! density on the arcs of the spectrum plus an atom of mass `2 sin(gap/2)` at
//! the bisector of every gap between consecutive support components (the jump
//! of `h'` where two cosine pieces meet). A spectral measure additionally
//! carries masses: atoms plus piecewise-constant density, with Fourier
//! coefficients and the circle variance formula
//! `E|F(r e^{i theta})|^2 = int e^{2 r cos(theta + t)} d rho(t)`.

use crate::num::{log_add_exp, principal_angle, quad};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const ANGLE_EPS: f64 = 1e-12;
const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Closed subset of the unit circle: disjoint closed arcs plus isolated points.
///
/// Angles are radians in `(-pi, pi]`. An arc `(lo, hi)` satisfies
/// `lo < hi <= lo + 2 pi`; `hi` may exceed `pi` to express wrap-around.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSet {
    arcs: Vec<(f64, f64)>,
    points: Vec<f64>,
}

impl SpectrumSet {
    /// Build and canonicalize; rejects an empty support.
    pub fn new(arcs: Vec<(f64, f64)>, points: Vec<f64>) -> Result<Self> {
        for &(lo, hi) in &arcs {
            if !(hi > lo) || hi - lo > TWO_PI + ANGLE_EPS {
                return Err(Error::InvalidSpectrum(format!("bad arc ({lo}, {hi})")));
            }
        }
        if arcs.is_empty() && points.is_empty() {
            return Err(Error::InvalidSpectrum("empty spectrum".into()));
        }
        let mut s = SpectrumSet { arcs, points };
        s.canonicalize();
        Ok(s)
    }

    pub fn full_circle() -> Self {
        SpectrumSet { arcs: vec![(-std::f64::consts::PI, std::f64::consts::PI)], points: vec![] }
    }

    pub fn from_points(points: &[f64]) -> Result<Self> {
        Self::new(vec![], points.to_vec())
    }

    pub fn single_point(t: f64) -> Self {
        SpectrumSet { arcs: vec![], points: vec![principal_angle(t)] }
    }

    pub fn arcs(&self) -> &[(f64, f64)] {
        &self.arcs
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn is_full_circle(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].1 - self.arcs[0].0 >= TWO_PI - ANGLE_EPS
    }

    fn canonicalize(&mut self) {
        if self.arcs.iter().any(|&(lo, hi)| hi - lo >= TWO_PI - ANGLE_EPS) {
            *self = Self::full_circle();
            return;
        }
        let mut arcs: Vec<(f64, f64)> = self
            .arcs
            .iter()
            .map(|&(lo, hi)| {
                let l = principal_angle(lo);
                (l, l + (hi - lo))
            })
            .collect();
        arcs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let merged = merge_cyclic(&arcs);
        if merged.iter().any(|&(lo, hi)| hi - lo >= TWO_PI - ANGLE_EPS) {
            *self = Self::full_circle();
            return;
        }
        let mut points: Vec<f64> = self.points.iter().map(|&t| principal_angle(t)).collect();
        points.sort_by(f64::total_cmp);
        points.dedup_by(|a, b| (*a - *b).abs() < ANGLE_EPS);
        points.retain(|&t| !merged.iter().any(|&(lo, hi)| contains_cyclic(lo, hi, t, ANGLE_EPS)));
        self.arcs = merged;
        self.points = points;
    }

    /// Reflection in the real axis (`t -> -t`); an involution.
    pub fn reflect(&self) -> SpectrumSet {
        let arcs = self.arcs.iter().map(|&(lo, hi)| (-hi, -lo)).collect();
        let points = self.points.iter().map(|&t| -t).collect();
        let mut s = SpectrumSet { arcs, points };
        s.canonicalize();
        s
    }

    /// Rotate every support angle by `phi`.
    pub fn rotate(&self, phi: f64) -> SpectrumSet {
        let arcs = self.arcs.iter().map(|&(lo, hi)| (lo + phi, hi + phi)).collect();
        let points = self.points.iter().map(|&t| t + phi).collect();
        let mut s = SpectrumSet { arcs, points };
        s.canonicalize();
        s
    }

    /// Angular distance from `theta` to the support, in `[0, pi]`.
    fn distance(&self, theta: f64) -> f64 {
        let mut best = f64::INFINITY;
        for &(lo, hi) in &self.arcs {
            if contains_cyclic(lo, hi, theta, 0.0) {
                return 0.0;
            }
            best = best.min(ang_dist(theta, lo)).min(ang_dist(theta, hi));
        }
        for &t in &self.points {
            best = best.min(ang_dist(theta, t));
        }
        best
    }

    /// Supporting function `h(theta) = max_{t in support} cos(theta - t)`.
    pub fn supporting_function(&self, theta: f64) -> f64 {
        self.distance(theta).cos()
    }

    /// Minkowski functional `H(z) = |z| h(arg z)`, with `H(0) = 0`.
    pub fn minkowski(&self, z: Complex64) -> f64 {
        let r = z.norm();
        if r == 0.0 {
            0.0
        } else {
            r * self.supporting_function(z.arg())
        }
    }

    /// Support components in cyclic order as `(start, end)` spans
    /// (points have `start == end`). Used for gap enumeration.
    fn components(&self) -> Vec<(f64, f64)> {
        let mut comps: Vec<(f64, f64)> = self.arcs.clone();
        comps.extend(self.points.iter().map(|&t| (t, t)));
        comps.sort_by(|a, b| a.0.total_cmp(&b.0));
        comps
    }

    /// Angular zero-density measure `(h'' + h) dtheta`.
    pub fn angular_density(&self) -> AngularDensity {
        if self.is_full_circle() {
            return AngularDensity {
                atoms: vec![],
                arcs: vec![(-std::f64::consts::PI, std::f64::consts::PI)],
            };
        }
        let comps = self.components();
        let mut atoms = Vec::new();
        let n = comps.len();
        for i in 0..n {
            let end = comps[i].1;
            let next_start = if i + 1 < n { comps[i + 1].0 } else { comps[0].0 + TWO_PI };
            let gap = next_start - end;
            if gap <= ANGLE_EPS {
                continue;
            }
            // h' jumps by 2 sin(gap/2) where the two cosine pieces meet;
            // a full-circle gap (single support point) gives sin(pi) = 0.
            let mass = 2.0 * (0.5 * gap).sin();
            if mass > ANGLE_EPS {
                atoms.push((principal_angle(end + 0.5 * gap), mass));
            }
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        AngularDensity { atoms, arcs: self.arcs.clone() }
    }
}

fn ang_dist(a: f64, b: f64) -> f64 {
    principal_angle(a - b).abs()
}

fn contains_cyclic(lo: f64, hi: f64, t: f64, eps: f64) -> bool {
    let mut x = t;
    while x < lo - eps {
        x += TWO_PI;
    }
    while x - TWO_PI >= lo - eps {
        x -= TWO_PI;
    }
    x <= hi + eps
}

fn merge_cyclic(sorted: &[(f64, f64)]) -> Vec<(f64, f64)> {
    if sorted.is_empty() {
        return vec![];
    }
    let mut out: Vec<(f64, f64)> = vec![sorted[0]];
    for &(lo, hi) in &sorted[1..] {
        let last = out.last_mut().expect("non-empty");
        if lo <= last.1 + ANGLE_EPS {
            last.1 = last.1.max(hi);
        } else {
            out.push((lo, hi));
        }
    }
    // Wrap-around merge between the last and the first arc.
    if out.len() > 1 {
        let first = out[0];
        let last = *out.last().expect("non-empty");
        if first.0 + TWO_PI <= last.1 + ANGLE_EPS {
            let merged_lo = last.0;
            let merged_hi = last.1.max(first.1 + TWO_PI);
            out.truncate(out.len() - 1);
            out.remove(0);
            let l = principal_angle(merged_lo);
            out.push((l, l + (merged_hi - merged_lo)));
            out.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
    }
    out
}

/// The measure `ds = (h'' + h) dtheta`: unit-density arcs plus gap atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct AngularDensity {
    /// `(angle, mass)` pairs, angles in `(-pi, pi]`, sorted.
    pub atoms: Vec<(f64, f64)>,
    /// Arcs carrying density one.
    pub arcs: Vec<(f64, f64)>,
}

impl AngularDensity {
    pub fn total_mass(&self) -> f64 {
        let atom_mass: f64 = self.atoms.iter().map(|&(_, m)| m).sum();
        let arc_mass: f64 = self.arcs.iter().map(|&(lo, hi)| hi - lo).sum();
        atom_mass + arc_mass
    }

    /// True when some atom sits within `tol` of `theta` (mod 2 pi).
    pub fn has_atom_near(&self, theta: f64, tol: f64) -> bool {
        self.atoms.iter().any(|&(a, _)| ang_dist(a, theta) <= tol)
    }

    /// Cumulative function: measure of `(-pi, theta]` for `theta` in the
    /// principal range, extended to all of `R` by whole-mass periods.
    /// Right-continuous across atoms.
    pub fn cumulative(&self, theta: f64) -> f64 {
        let base = -std::f64::consts::PI;
        let k = ((theta - base) / TWO_PI).floor();
        let t = theta - k * TWO_PI; // in [-pi, pi)
        let mut s = k * self.total_mass();
        for &(a, m) in &self.atoms {
            if a <= t + ANGLE_EPS {
                s += m;
            }
        }
        for &(lo, hi) in &self.arcs {
            // An arc may extend past pi; count both unwrapped images.
            for shift in [0.0, -TWO_PI] {
                let (l, h) = (lo + shift, hi + shift);
                if h <= base {
                    continue;
                }
                let a = l.max(base);
                let b = h.min(t);
                if b > a {
                    s += b - a;
                }
            }
        }
        s
    }

    /// Measure of `(theta1, theta2]`, wrap-aware.
    pub fn mass_between(&self, theta1: f64, theta2: f64) -> f64 {
        self.cumulative(theta2) - self.cumulative(theta1)
    }

    /// Translate all angles by `phi`.
    pub fn rotate(&self, phi: f64) -> AngularDensity {
        let mut atoms: Vec<(f64, f64)> =
            self.atoms.iter().map(|&(a, m)| (principal_angle(a + phi), m)).collect();
        atoms.sort_by(|x, y| x.0.total_cmp(&y.0));
        let arcs = self
            .arcs
            .iter()
            .map(|&(lo, hi)| {
                let l = principal_angle(lo + phi);
                (l, l + (hi - lo))
            })
            .collect();
        AngularDensity { atoms, arcs }
    }
}

/// Expected zero count of the sector `(theta1, theta2]` in the disk of
/// radius `r`: `(s(theta2) - s(theta1)) r / (2 pi)`.
///
/// Endpoints falling on atoms of the density are rejected (the prediction
/// excludes these exceptional sector boundaries).
pub fn predicted_sector_count(
    sigma: &SpectrumSet,
    r: f64,
    theta1: f64,
    theta2: f64,
) -> Result<f64> {
    if !(theta2 > theta1) {
        return Err(Error::InvalidSpectrum("need theta1 < theta2".into()));
    }
    let density = sigma.angular_density();
    for &t in &[theta1, theta2] {
        if density.has_atom_near(t, 1e-9) {
            return Err(Error::AtomAtEndpoint { theta: t });
        }
    }
    Ok(density.mass_between(theta1, theta2) * r / TWO_PI)
}

/// Non-negative measure on the circle: atoms plus piecewise-constant density.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralMeasure {
    /// `(angle, mass)` with positive masses, angles distinct in `(-pi, pi]`.
    atoms: Vec<(f64, f64)>,
    /// `(lo, hi, level)` with non-negative level; arcs disjoint.
    density: Vec<(f64, f64, f64)>,
}

impl SpectralMeasure {
    pub fn new(atoms: Vec<(f64, f64)>, density: Vec<(f64, f64, f64)>) -> Result<Self> {
        let mut at: Vec<(f64, f64)> =
            atoms.into_iter().map(|(t, m)| (principal_angle(t), m)).collect();
        at.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in at.windows(2) {
            if (w[0].0 - w[1].0).abs() < ANGLE_EPS {
                return Err(Error::InvalidSpectrum("duplicate atom angles".into()));
            }
        }
        if at.iter().any(|&(_, m)| m <= 0.0) {
            return Err(Error::InvalidSpectrum("atom masses must be positive".into()));
        }
        for &(lo, hi, level) in &density {
            if !(hi > lo) || hi - lo > TWO_PI + ANGLE_EPS || level < 0.0 || !level.is_finite() {
                return Err(Error::InvalidSpectrum(format!(
                    "bad density piece ({lo}, {hi}, {level})"
                )));
            }
        }
        let m = SpectralMeasure { atoms: at, density };
        if m.total_mass() <= 0.0 {
            return Err(Error::InvalidSpectrum("zero measure".into()));
        }
        Ok(m)
    }

    /// A single unit atom at angle `t`.
    pub fn dirac(t: f64) -> Self {
        SpectralMeasure { atoms: vec![(principal_angle(t), 1.0)], density: vec![] }
    }

    /// Normalized Lebesgue measure on the circle.
    pub fn lebesgue_normalized() -> Self {
        SpectralMeasure {
            atoms: vec![],
            density: vec![(-std::f64::consts::PI, std::f64::consts::PI, 1.0 / TWO_PI)],
        }
    }

    /// Equal atoms of total mass one at the given angles.
    pub fn equal_atoms(angles: &[f64]) -> Result<Self> {
        let m = 1.0 / angles.len() as f64;
        Self::new(angles.iter().map(|&t| (t, m)).collect(), vec![])
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn density_pieces(&self) -> &[(f64, f64, f64)] {
        &self.density
    }

    pub fn total_mass(&self) -> f64 {
        let a: f64 = self.atoms.iter().map(|&(_, m)| m).sum();
        let d: f64 = self.density.iter().map(|&(lo, hi, l)| (hi - lo) * l).sum();
        a + d
    }

    /// Density level at angle `t` (zero off the carrying arcs).
    pub fn density_at(&self, t: f64) -> f64 {
        for &(lo, hi, level) in &self.density {
            if contains_cyclic(lo, hi, t, 0.0) {
                return level;
            }
        }
        0.0
    }

    /// The support as a spectrum set (atoms become points, positive-level
    /// arcs become arcs).
    pub fn support(&self) -> Result<SpectrumSet> {
        let arcs = self
            .density
            .iter()
            .filter(|&&(_, _, level)| level > 0.0)
            .map(|&(lo, hi, _)| (lo, hi))
            .collect();
        let points = self.atoms.iter().map(|&(t, _)| t).collect();
        SpectrumSet::new(arcs, points)
    }

    /// Fourier coefficient `rho_hat(m) = int e^{-i m t} d rho(t)`.
    pub fn fourier(&self, m: i64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mf = m as f64;
        for &(t, mass) in &self.atoms {
            let (s, c) = (-mf * t).sin_cos();
            acc += mass * Complex64::new(c, s);
        }
        for &(lo, hi, level) in &self.density {
            if m == 0 {
                acc += level * (hi - lo);
            } else {
                let e_hi = Complex64::new(0.0, -mf * hi).exp();
                let e_lo = Complex64::new(0.0, -mf * lo).exp();
                acc += level * (e_hi - e_lo) / Complex64::new(0.0, -mf);
            }
        }
        acc
    }
}

/// `E |F(r e^{i theta})|^2` held as a logarithm (overflow-safe).
#[derive(Clone, Copy, Debug)]
pub struct CircleVariance {
    /// Natural log of the variance.
    pub log: f64,
    /// Achieved relative quadrature error (zero for purely atomic measures).
    pub quad_error: f64,
}

impl CircleVariance {
    /// The plain value; `inf` when it exceeds the f64 range.
    pub fn value(&self) -> f64 {
        self.log.exp()
    }
}

/// `int e^{2 r cos(theta + t)} d rho(t)`: exact atom sum plus adaptive
/// quadrature on the density arcs to relative error `1e-10`.
pub fn variance_on_circle(rho: &SpectralMeasure, r: f64, theta: f64) -> Result<CircleVariance> {
    const REL_TOL: f64 = 1e-10;
    let mut log_terms: Vec<f64> = Vec::new();
    for &(t, mass) in rho.atoms() {
        log_terms.push(2.0 * r * (theta + t).cos() + mass.ln());
    }
    let mut quad_error: f64 = 0.0;
    for &(lo, hi, level) in rho.density_pieces() {
        if level == 0.0 {
            continue;
        }
        // Log offset at the peak of cos(theta + t) over [lo, hi]: endpoints
        // plus interior stationary points t = -theta mod pi.
        let mut off = (2.0 * r * (theta + lo).cos()).max(2.0 * r * (theta + hi).cos());
        let mut t0 = -theta - (((-theta - lo) / std::f64::consts::PI).floor()) * std::f64::consts::PI;
        while t0 <= hi {
            if t0 >= lo {
                off = off.max(2.0 * r * (theta + t0).cos());
            }
            t0 += std::f64::consts::PI;
        }
        let integrand = move |t: f64| (2.0 * r * (theta + t).cos() - off).exp();
        let (v, err) = quad::integrate(&integrand, lo, hi, REL_TOL)?;
        if v > 0.0 {
            log_terms.push(off + (level * v).ln());
            quad_error = quad_error.max(err / v);
        }
    }
    let log = log_terms.into_iter().fold(f64::NEG_INFINITY, log_add_exp);
    Ok(CircleVariance { log, quad_error })
}

#[cfg(test)]
mod tests;
