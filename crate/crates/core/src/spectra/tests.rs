use super::*;
use proptest::prelude::*;
use std::f64::consts::PI;

fn h(s: &SpectrumSet, theta: f64) -> f64 {
    s.supporting_function(theta)
}

#[test]
fn supporting_function_full_circle_is_one() {
    let s = SpectrumSet::full_circle();
    for k in 0..32 {
        let theta = -PI + TWO_PI * k as f64 / 32.0;
        assert!((h(&s, theta) - 1.0).abs() < 1e-14);
    }
}

#[test]
fn supporting_function_single_point_is_cosine() {
    let s = SpectrumSet::single_point(0.0);
    for k in 0..64 {
        let theta = -PI + TWO_PI * k as f64 / 64.0 + 1e-3;
        assert!((h(&s, theta) - theta.cos()).abs() < 1e-12, "theta={theta}");
    }
}

#[test]
fn supporting_function_two_antipodal_points() {
    let s = SpectrumSet::from_points(&[0.0, PI]).unwrap();
    for k in 0..64 {
        let theta = -PI + TWO_PI * k as f64 / 64.0 + 1e-3;
        assert!((h(&s, theta) - theta.cos().abs()).abs() < 1e-12);
    }
}

#[test]
fn reflect_basics() {
    assert!(SpectrumSet::full_circle().reflect().is_full_circle());
    let p = SpectrumSet::single_point(PI / 3.0).reflect();
    assert!((p.points()[0] + PI / 3.0).abs() < 1e-15);
    let a = SpectrumSet::new(vec![(0.1, 0.5)], vec![]).unwrap().reflect();
    assert!((a.arcs()[0].0 + 0.5).abs() < 1e-15);
    assert!((a.arcs()[0].1 + 0.1).abs() < 1e-15);
}

#[test]
fn angular_density_full_circle() {
    let d = SpectrumSet::full_circle().angular_density();
    assert!(d.atoms.is_empty());
    assert!((d.total_mass() - TWO_PI).abs() < 1e-12);
}

#[test]
fn angular_density_cosh_spectrum() {
    // {0, pi}: gaps of width pi on both sides, atoms of mass 2 at +-pi/2.
    let d = SpectrumSet::from_points(&[0.0, PI]).unwrap().angular_density();
    assert_eq!(d.atoms.len(), 2);
    for &(a, m) in &d.atoms {
        assert!((a.abs() - PI / 2.0).abs() < 1e-12);
        assert!((m - 2.0).abs() < 1e-12);
    }
    assert!((d.total_mass() - 4.0).abs() < 1e-12);
}

#[test]
fn angular_density_single_point_is_zero_measure() {
    let d = SpectrumSet::single_point(0.0).angular_density();
    assert!(d.atoms.is_empty());
    assert!(d.arcs.is_empty());
    assert_eq!(d.total_mass(), 0.0);
}

#[test]
fn angular_density_wide_gap_has_antipodal_atoms() {
    // {0, 3pi/4}: the zeros of A e^z + B e^{z w} (w = e^{-3i pi/4}) lie on a
    // full line with direction arg = 3pi/8, so both bisectors carry mass
    // 2 sin(3pi/8) (the h' jump is 2 sin(gap/2) and sin((2pi-g)/2) = sin(g/2)).
    let d = SpectrumSet::from_points(&[0.0, 3.0 * PI / 4.0]).unwrap().angular_density();
    assert_eq!(d.atoms.len(), 2);
    let m = 2.0 * (3.0 * PI / 8.0).sin();
    let bis_small = 3.0 * PI / 8.0;
    let bis_large = principal_angle(3.0 * PI / 8.0 + PI);
    for &(a, mass) in &d.atoms {
        assert!((mass - m).abs() < 1e-12);
        assert!(
            (a - bis_small).abs() < 1e-12 || (a - bis_large).abs() < 1e-12,
            "unexpected atom angle {a}"
        );
    }
}

#[test]
fn predicted_counts() {
    // Uniform: (theta2 - theta1) r / (2 pi).
    let t = SpectrumSet::full_circle();
    let v = predicted_sector_count(&t, 100.0, 0.0, PI / 2.0).unwrap();
    assert!((v - (PI / 2.0) * 100.0 / TWO_PI).abs() < 1e-10);
    assert!((v - 25.0).abs() < 1e-10);

    let cosh = SpectrumSet::from_points(&[0.0, PI]).unwrap();
    let v = predicted_sector_count(&cosh, 10.0, PI / 4.0, 3.0 * PI / 4.0).unwrap();
    assert!((v - 2.0 * 10.0 / TWO_PI).abs() < 1e-10);

    // Empty sector mass.
    let v = predicted_sector_count(&cosh, 10.0, 0.1, 0.2).unwrap();
    assert_eq!(v, 0.0);

    // Endpoint at an atom is rejected.
    assert!(matches!(
        predicted_sector_count(&cosh, 10.0, PI / 2.0, 3.0 * PI / 4.0),
        Err(Error::AtomAtEndpoint { .. })
    ));
}

#[test]
fn minkowski_examples() {
    let s0 = SpectrumSet::single_point(0.0);
    assert_eq!(s0.minkowski(Complex64::new(0.0, 0.0)), 0.0);
    let z = Complex64::from_polar(3.0, 1.1);
    assert!((s0.minkowski(z) - 3.0 * 1.1f64.cos()).abs() < 1e-12);
    let t = SpectrumSet::full_circle();
    assert!((t.minkowski(z) - 3.0).abs() < 1e-12);
}

#[test]
fn fourier_examples() {
    let d0 = SpectralMeasure::dirac(0.0);
    for m in [-3i64, 0, 1, 7] {
        assert!((d0.fourier(m) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }
    let leb = SpectralMeasure::lebesgue_normalized();
    assert!(leb.fourier(3).norm() < 1e-14);
    assert!((leb.fourier(0) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    let pair = SpectralMeasure::equal_atoms(&[PI / 2.0, -PI / 2.0]).unwrap();
    // rho_hat(m) = cos(m pi / 2)
    assert!(pair.fourier(1).norm() < 1e-14);
    assert!((pair.fourier(2) - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
}

#[test]
fn variance_atomic_cases() {
    let r = 7.0;
    let d0 = SpectralMeasure::dirac(0.0);
    let v = variance_on_circle(&d0, r, 0.0).unwrap();
    assert!((v.log - 2.0 * r).abs() < 1e-12);
    let dpi = SpectralMeasure::dirac(PI);
    let v = variance_on_circle(&dpi, r, 0.0).unwrap();
    assert!((v.log + 2.0 * r).abs() < 1e-12);
}

/// I_0(2r) by its Taylor series: sum_n r^{2n} / (n!)^2.
fn bessel_i0_series(r: f64) -> f64 {
    let mut term = 1.0f64;
    let mut sum = 0.0f64;
    let mut n = 0u32;
    loop {
        sum += term;
        n += 1;
        term *= (r * r) / ((n as f64) * (n as f64));
        if term < sum * 1e-18 {
            return sum;
        }
    }
}

#[test]
fn variance_lebesgue_is_bessel() {
    for &r in &[1.0, 5.0, 10.0, 20.0] {
        let v = variance_on_circle(&SpectralMeasure::lebesgue_normalized(), r, 0.3).unwrap();
        let expect = bessel_i0_series(r);
        let rel = (v.value() - expect).abs() / expect;
        assert!(rel < 1e-10, "r={r} rel={rel}");
    }
}

/// Direct double series for the variance (truncated to convergence).
fn variance_double_series(rho: &SpectralMeasure, r: f64, theta: f64) -> f64 {
    let dmax = (r as usize) + 14 * (r.sqrt() as usize) + 24;
    let mut lng = vec![0.0f64; dmax + 2];
    for n in 1..=dmax + 1 {
        lng[n] = lng[n - 1] + (n as f64).ln();
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for n1 in 0..=dmax {
        for n2 in 0..=dmax {
            let w = ((n1 + n2) as f64) * r.ln() - lng[n1] - lng[n2];
            let rho_hat = rho.fourier(n2 as i64 - n1 as i64);
            let phase = Complex64::new(0.0, (n1 as f64 - n2 as f64) * theta).exp();
            acc += rho_hat * phase * w.exp();
        }
    }
    acc.re
}

#[test]
fn variance_matches_double_series() {
    let measures = [
        SpectralMeasure::dirac(0.4),
        SpectralMeasure::equal_atoms(&[PI / 2.0, -PI / 2.0]).unwrap(),
        SpectralMeasure::lebesgue_normalized(),
        SpectralMeasure::new(vec![(0.0, 0.5)], vec![(-1.0, 1.0, 0.25)]).unwrap(),
    ];
    for rho in &measures {
        for &(r, theta) in &[(2.0, 0.0), (10.0, 0.7)] {
            let v = variance_on_circle(rho, r, theta).unwrap().value();
            let d = variance_double_series(rho, r, theta);
            let rel = (v - d).abs() / d.abs().max(1e-300);
            assert!(rel < 1e-8, "r={r} theta={theta} v={v} d={d}");
        }
    }
}

#[test]
fn log_variance_approaches_supporting_function() {
    // (1/2r) log Var -> h_{sigma*}(theta) for atomic measures.
    let rho = SpectralMeasure::equal_atoms(&[0.9, -2.0]).unwrap();
    let sigma_star = rho.support().unwrap().reflect();
    let r = 200.0;
    for k in 0..8 {
        let theta = -PI + TWO_PI * (k as f64 + 0.37) / 8.0;
        let v = variance_on_circle(&rho, r, theta).unwrap();
        let approx = v.log / (2.0 * r);
        let target = sigma_star.supporting_function(theta);
        assert!((approx - target).abs() < 0.05, "theta={theta} approx={approx} target={target}");
        // Monotone-in-r approach: the defect shrinks from r=50 to r=200.
        let v50 = variance_on_circle(&rho, 50.0, theta).unwrap();
        let d50 = (v50.log / 100.0 - target).abs();
        let d200 = (approx - target).abs();
        assert!(d200 <= d50 + 1e-12);
    }
}

#[test]
fn density_mass_and_support() {
    let rho = SpectralMeasure::new(vec![(1.0, 2.0)], vec![(0.0, 0.5, 2.0)]).unwrap();
    assert!((rho.total_mass() - 3.0).abs() < 1e-14);
    assert_eq!(rho.density_at(0.25), 2.0);
    assert_eq!(rho.density_at(1.5), 0.0);
    let supp = rho.support().unwrap();
    assert_eq!(supp.arcs().len(), 1);
    assert_eq!(supp.points().len(), 1);
}

#[test]
fn zero_measure_rejected() {
    assert!(SpectralMeasure::new(vec![], vec![]).is_err());
    assert!(SpectralMeasure::new(vec![], vec![(0.0, 1.0, 0.0)]).is_err());
}

proptest! {
    #[test]
    fn reflect_is_involution(angles in proptest::collection::vec(-3.14f64..3.14, 1..6)) {
        let s = SpectrumSet::from_points(&angles).unwrap();
        let back = s.reflect().reflect();
        prop_assert_eq!(s.points().len(), back.points().len());
        for (a, b) in s.points().iter().zip(back.points()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn supporting_function_lipschitz_and_bounded(
        angles in proptest::collection::vec(-3.14f64..3.14, 1..6),
        t1 in -3.14f64..3.14,
        t2 in -3.14f64..3.14,
    ) {
        let s = SpectrumSet::from_points(&angles).unwrap();
        let h1 = s.supporting_function(t1);
        let h2 = s.supporting_function(t2);
        prop_assert!(h1 <= 1.0 + 1e-12);
        prop_assert!((h1 - h2).abs() <= ang_dist(t1, t2) + 1e-9);
    }

    #[test]
    fn density_rotation_covariance(
        angles in proptest::collection::vec(-3.0f64..3.0, 2..5),
        phi in -3.0f64..3.0,
    ) {
        let s = SpectrumSet::from_points(&angles).unwrap();
        let rotated_first = s.rotate(phi).angular_density();
        let density_then_rotate = s.angular_density().rotate(phi);
        prop_assert!((rotated_first.total_mass() - density_then_rotate.total_mass()).abs() < 1e-9);
        prop_assert_eq!(rotated_first.atoms.len(), density_then_rotate.atoms.len());
        for (&(a1, m1), &(a2, m2)) in
            rotated_first.atoms.iter().zip(density_then_rotate.atoms.iter())
        {
            prop_assert!(ang_dist(a1, a2) < 1e-9);
            prop_assert!((m1 - m2).abs() < 1e-9);
        }
    }

    #[test]
    fn density_reflection_covariance(angles in proptest::collection::vec(-3.0f64..3.0, 2..5)) {
        let s = SpectrumSet::from_points(&angles).unwrap();
        let refl = s.reflect().angular_density();
        let direct = s.angular_density();
        prop_assert!((refl.total_mass() - direct.total_mass()).abs() < 1e-9);
        // Atom sets should be mirror images.
        for &(a, m) in &direct.atoms {
            let found = refl
                .atoms
                .iter()
                .any(|&(b, mb)| ang_dist(b, -a) < 1e-9 && (mb - m).abs() < 1e-9);
            prop_assert!(found, "missing mirrored atom at {}", -a);
        }
    }

    #[test]
    fn supporting_function_is_one_exactly_on_support(
        angles in proptest::collection::vec(-3.0f64..3.0, 1..5),
    ) {
        let s = SpectrumSet::from_points(&angles).unwrap();
        for &t in s.points() {
            prop_assert!((s.supporting_function(t) - 1.0).abs() < 1e-12);
        }
        // Off the support, strictly below one.
        for &t in s.points() {
            let off = t + 0.05;
            if s.points().iter().all(|&u| ang_dist(off, u) > 0.04) {
                prop_assert!(s.supporting_function(off) < 1.0 - 1e-6);
            }
        }
    }
}
