//! Simultaneous root finding for scaled Taylor sections.
//!
//! Aberth–Ehrlich iteration over exponent-offset coefficients is the primary
//! method; a balanced companion-matrix eigensolve backs it up for moderate
//! degrees. Initial guesses come from the upper convex hull of
//! `(n, log |c_n|)` (one circle of starts per hull edge), which is what makes
//! the iteration converge on coefficient profiles spanning thousands of
//! binary orders of magnitude.

use crate::num::sc::{horner_with_derivative, Sc};
use crate::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootMethod {
    Aberth,
    Eigen,
}

#[derive(Clone, Debug)]
pub struct RootsOutcome {
    /// Roots of the trimmed polynomial (origin roots excluded).
    pub roots: Vec<Complex64>,
    /// Multiplicity of the root at the origin (trailing zero coefficients).
    pub origin_multiplicity: usize,
    pub method: RootMethod,
    pub sweeps: usize,
}

const MAX_SWEEPS: usize = 400;
const EIGEN_DEGREE_CAP: usize = 500;

/// All roots of `sum_n coeffs[n] w^n`.
pub fn all_roots(coeffs: &[Sc]) -> Result<RootsOutcome> {
    let hi = match coeffs.iter().rposition(|c| !c.is_zero()) {
        Some(h) => h,
        None => return Err(Error::RootFinding("zero polynomial".into())),
    };
    let lo = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero exists");
    let trimmed = &coeffs[lo..=hi];
    let degree = trimmed.len() - 1;
    if degree == 0 {
        return Ok(RootsOutcome {
            roots: vec![],
            origin_multiplicity: lo,
            method: RootMethod::Aberth,
            sweeps: 0,
        });
    }

    let mut roots = initial_guesses(trimmed);
    match aberth(trimmed, &mut roots) {
        Ok(sweeps) => Ok(RootsOutcome {
            roots,
            origin_multiplicity: lo,
            method: RootMethod::Aberth,
            sweeps,
        }),
        Err(e) => {
            if degree <= EIGEN_DEGREE_CAP {
                let roots = companion_eigenvalues(trimmed)?;
                Ok(RootsOutcome {
                    roots,
                    origin_multiplicity: lo,
                    method: RootMethod::Eigen,
                    sweeps: MAX_SWEEPS,
                })
            } else {
                Err(e)
            }
        }
    }
}

/// Starting points on circles given by the upper convex hull of
/// `(n, log |c_n|)`.
fn initial_guesses(coeffs: &[Sc]) -> Vec<Complex64> {
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| (n, c.log_abs()))
        .collect();
    // Upper convex hull by monotone scan.
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &(x, y) in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 - x1) as f64 * (y - y1) - (x - x1) as f64 * (y2 - y1);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }
    let mut out = Vec::with_capacity(coeffs.len() - 1);
    for (edge_idx, seg) in hull.windows(2).enumerate() {
        let (n1, v1) = seg[0];
        let (n2, v2) = seg[1];
        let count = n2 - n1;
        let radius = ((v1 - v2) / count as f64).exp();
        for i in 0..count {
            let angle = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / count as f64
                + 0.41 * (edge_idx as f64 + 1.0);
            out.push(Complex64::from_polar(radius, angle));
        }
    }
    out
}

fn aberth(coeffs: &[Sc], roots: &mut [Complex64]) -> Result<usize> {
    let d = roots.len();
    let tol = 1e-14;
    let mut converged = vec![false; d];
    for sweep in 0..MAX_SWEEPS {
        let mut all_done = true;
        for i in 0..d {
            if converged[i] {
                continue;
            }
            let w = roots[i];
            let (p, dp) = horner_with_derivative(coeffs, w);
            if p.is_zero() {
                converged[i] = true;
                continue;
            }
            if dp.is_zero() {
                // Nudge off a critical point.
                roots[i] += Complex64::new(1e-8, 1e-8);
                all_done = false;
                continue;
            }
            let newton = p.ratio(&dp);
            if !newton.re.is_finite() || !newton.im.is_finite() {
                // p/p' out of the double range: the iterate is far from any
                // root; pull it inward instead.
                roots[i] = w * 0.5;
                all_done = false;
                continue;
            }
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, &other) in roots.iter().enumerate() {
                if j != i {
                    let diff = w - other;
                    let n2 = diff.norm_sqr();
                    if n2 > 1e-60 {
                        repulsion += diff.conj() / n2;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let correction = if denom.norm_sqr() < 1e-24 { newton } else { newton / denom };
            let next = w - correction;
            roots[i] = next;
            if correction.norm() <= tol * (1.0 + next.norm()) {
                converged[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return Ok(sweep + 1);
        }
    }
    let unconverged = converged.iter().filter(|&&c| !c).count();
    Err(Error::RootFinding(format!(
        "Aberth left {unconverged}/{d} roots unconverged after {MAX_SWEEPS} sweeps"
    )))
}

/// Eigenvalues of the balanced companion matrix (fallback path).
fn companion_eigenvalues(coeffs: &[Sc]) -> Result<Vec<Complex64>> {
    let d = coeffs.len() - 1;
    let lead = &coeffs[d];
    let ratios: Vec<Complex64> = (0..d).map(|n| coeffs[n].ratio(lead)).collect();
    if ratios.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::RootFinding(
            "companion entries exceed the double range; eigen fallback unusable".into(),
        ));
    }
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -ratios[i];
    }
    balance(&mut m);
    m.eigenvalues()
        .map(|v| v.iter().copied().collect())
        .ok_or_else(|| Error::RootFinding("companion eigensolve did not converge".into()))
}

/// Parlett–Reinsch style diagonal balancing (norm equalization).
fn balance(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    for _ in 0..8 {
        let mut changed = false;
        for i in 0..n {
            let mut row = 0.0f64;
            let mut col = 0.0f64;
            for j in 0..n {
                if j != i {
                    row += m[(i, j)].norm();
                    col += m[(j, i)].norm();
                }
            }
            if row == 0.0 || col == 0.0 {
                continue;
            }
            let mut f = 1.0f64;
            let mut c = col;
            let s = row + col;
            while c < row / 2.0 {
                f *= 2.0;
                c *= 4.0;
            }
            while c > row * 2.0 {
                f /= 2.0;
                c /= 4.0;
            }
            if (row + c) / f < 0.95 * s {
                changed = true;
                for j in 0..n {
                    let v = m[(i, j)] / f;
                    m[(i, j)] = v;
                }
                for j in 0..n {
                    let v = m[(j, i)] * f;
                    m[(j, i)] = v;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// A few plain Newton steps to polish a root in place.
pub fn newton_polish(coeffs: &[Sc], w: Complex64, steps: usize) -> Complex64 {
    let mut z = w;
    for _ in 0..steps {
        let (p, dp) = horner_with_derivative(coeffs, z);
        if p.is_zero() || dp.is_zero() {
            return z;
        }
        let step = p.ratio(&dp);
        if !step.re.is_finite() || !step.im.is_finite() {
            return z;
        }
        z -= step;
    }
    z
}
