use super::*;
use std::f64::consts::PI;

fn exact(s: &str) -> ExactReal {
    s.parse().unwrap()
}

#[test]
fn zero_polynomial_gives_constant_one() {
    let q = PhasePolynomial::new(vec![exact("0")]).unwrap();
    let seq = polynomial_phase_seq(q).unwrap();
    for n in [0i64, 1, 7, 100_000] {
        assert!((seq.eval(n).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }
}

#[test]
fn half_square_polynomial_alternates() {
    // Q(x) = x^2 / 2: n^2 = n mod 2, so e(Q(n)) = (-1)^n.
    let q = PhasePolynomial::new(vec![exact("1/2")]).unwrap();
    let seq = polynomial_phase_seq(q).unwrap();
    for n in 0..=100i64 {
        let want = if n % 2 == 0 { 1.0 } else { -1.0 };
        assert!((seq.eval(n).unwrap() - Complex64::new(want, 0.0)).norm() < 1e-13, "n={n}");
    }
}

#[test]
fn sqrt2_square_phase_at_two() {
    let q = PhasePolynomial::new(vec![exact("sqrt(2)")]).unwrap();
    let seq = polynomial_phase_seq(q).unwrap();
    // frac(4 sqrt 2) = 0.65685424949238...
    let want = e(0.656_854_249_492_380_2);
    assert!((seq.eval(2).unwrap() - want).norm() < 1e-12);
}

#[test]
fn polynomial_rejects_empty() {
    assert!(PhasePolynomial::new(vec![]).is_err());
}

#[test]
fn phase_modulus_is_one_at_large_index() {
    let q = PhasePolynomial::new(vec![exact("sqrt(2)"), exact("1/3")]).unwrap();
    let seq = polynomial_phase_seq(q).unwrap();
    for n in [10_000i64, 1_000_000, 9_999_991, 10_000_000] {
        let v = seq.eval(n).unwrap().norm();
        assert!((v - 1.0).abs() < 4.0 * f64::EPSILON, "n={n} |xi|={v}");
    }
}

#[test]
fn power_phase_examples() {
    let seq = power_phase_seq(exact("3/2")).unwrap();
    assert!((seq.eval(0).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    // 4^{3/2} = 8 exactly, e(8) = 1.
    assert!((seq.eval(4).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-13);
    // 2^{3/2} = 2.8284271..., frac = 0.8284271247461901.
    let want = e(0.828_427_124_746_190_1);
    assert!((seq.eval(2).unwrap() - want).norm() < 1e-12);
}

#[test]
fn power_phase_rejects_small_beta_and_flags_integers() {
    assert!(power_phase_seq(exact("1")).is_err());
    assert!(power_phase_seq(exact("1/2")).is_err());
    let control = power_phase_seq(exact("2")).unwrap();
    assert!(control.is_integer_control());
    let normal = power_phase_seq(exact("3/2")).unwrap();
    assert!(!normal.is_integer_control());
}

#[test]
fn power_phase_large_index_precision() {
    // n = 10^6: n^{3/2} = 10^9, whose fractional part needs ~30 extra bits.
    // 10^6 is a perfect square so the value is exactly 10^9 and frac = 0.
    let seq = power_phase_seq(exact("3/2")).unwrap();
    assert!((seq.eval(1_000_000).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-10);
}

#[test]
fn gaussian_single_atom_is_constant() {
    let rho = SpectralMeasure::dirac(0.0);
    let seq = gaussian_stationary_seq(&rho, 50, 7).unwrap();
    let first = seq.eval(0).unwrap();
    assert!(first.norm() > 0.0);
    for n in 1..=50 {
        assert!((seq.eval(n).unwrap() - first).norm() < 1e-12);
    }
}

#[test]
fn gaussian_realization_is_deterministic() {
    let rho = SpectralMeasure::new(vec![(0.5, 1.0)], vec![(-1.0, 0.0, 0.3)]).unwrap();
    let a = gaussian_stationary_seq(&rho, 100, 42).unwrap();
    let b = gaussian_stationary_seq(&rho, 100, 42).unwrap();
    for n in 0..=100 {
        assert_eq!(a.eval(n).unwrap(), b.eval(n).unwrap());
    }
    let c = gaussian_stationary_seq(&rho, 100, 43).unwrap();
    assert_ne!(a.eval(3).unwrap(), c.eval(3).unwrap());
}

#[test]
fn gaussian_two_atom_covariance_matches_fourier() {
    // rho = (d_{pi/2} + d_{-pi/2})/2, rho_hat(m) = cos(m pi / 2).
    // Ensemble average over independent realizations.
    let rho = SpectralMeasure::equal_atoms(&[PI / 2.0, -PI / 2.0]).unwrap();
    let trials = 4000u64;
    for m in [0usize, 1, 2, 3, 4] {
        let mut acc = Complex64::new(0.0, 0.0);
        for s in 0..trials {
            let seq = gaussian_stationary_seq(&rho, m + 1, 1000 + s).unwrap();
            acc += seq.eval(0).unwrap() * seq.eval(m as i64).unwrap().conj();
        }
        let mean = acc / trials as f64;
        let want = rho.fourier(m as i64);
        // |zeta|^2 has unit variance; 4 sigma band for the trial mean.
        let band = 4.0 / (trials as f64).sqrt() + 0.02;
        assert!((mean - want).norm() < band, "m={m} mean={mean} want={want}");
    }
}

#[test]
fn gaussian_white_noise_time_average() {
    // Normalized Lebesgue: rho_hat(m) = [m == 0]; a single long realization
    // should have tiny lag correlations.
    let rho = SpectralMeasure::lebesgue_normalized();
    let n = 20_000usize;
    let seq = gaussian_stationary_seq(&rho, n + 5, 11).unwrap();
    let c0 = seq.autocovariance(0, n).unwrap();
    let c3 = seq.autocovariance(3, n).unwrap();
    assert!((c0.re - 1.0).abs() < 0.1, "c0={c0}");
    assert!(c3.norm() < 0.05, "c3={c3}");
}

#[test]
fn moving_average_autocovariance() {
    let n = 100_000usize;
    // kernel [1]: iid signs.
    let seq = moving_average_seq(vec![1.0], MaBase::SignSymmetric, 5).unwrap();
    let c0 = seq.autocovariance(0, n).unwrap();
    let c1 = seq.autocovariance(1, n).unwrap();
    assert!((c0.re - 1.0).abs() < 1e-12);
    assert!(c1.norm() < 3.0 / (n as f64).sqrt() + 0.01);

    // kernel [1, 1]: 2 at lag 0, 1 at lag 1, 0 beyond.
    let seq = moving_average_seq(vec![1.0, 1.0], MaBase::SignSymmetric, 6).unwrap();
    let band = 3.0 * 2.0 / (n as f64).sqrt() + 0.01;
    assert!((seq.autocovariance(0, n).unwrap().re - 2.0).abs() < band);
    assert!((seq.autocovariance(1, n).unwrap().re - 1.0).abs() < band);
    for m in [2usize, 3, 6] {
        assert!(seq.autocovariance(m, n).unwrap().norm() < band, "lag {m}");
    }
}

#[test]
fn moving_average_rejects_zero_kernel() {
    assert!(moving_average_seq(vec![0.0, 0.0], MaBase::SignSymmetric, 1).is_err());
}

#[test]
fn moving_average_bound_recorded() {
    let seq = moving_average_seq(vec![1.0, -2.0, 0.5], MaBase::SignSymmetric, 1).unwrap();
    assert!((seq.bound() - 3.5).abs() < 1e-15);
    for n in 0..200 {
        assert!(seq.eval(n).unwrap().norm() <= seq.bound() + 1e-12);
    }
}

#[test]
fn almost_periodic_basics() {
    let one = almost_periodic_seq(AlmostPeriodicSpec::new(vec![(0.0, (1.0, 0.0))]).unwrap()).unwrap();
    for n in [0i64, 3, 1000] {
        assert!((one.eval(n).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    let cos_seq = almost_periodic_seq(
        AlmostPeriodicSpec::new(vec![(PI / 2.0, (0.5, 0.0)), (-PI / 2.0, (0.5, 0.0))]).unwrap(),
    )
    .unwrap();
    for n in 0..64i64 {
        let want = (n as f64 * PI / 2.0).cos();
        assert!((cos_seq.eval(n).unwrap() - Complex64::new(want, 0.0)).norm() < 1e-12, "n={n}");
    }
}

#[test]
fn almost_periodic_fourier_recovery() {
    let pairs = vec![(PI / 2.0, (0.5, 0.0)), (-PI / 2.0, (0.5, 0.0))];
    let seq = almost_periodic_seq(AlmostPeriodicSpec::new(pairs.clone()).unwrap()).unwrap();
    let n = 10_000i64;
    for &(lambda, (cre, cim)) in &pairs {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let phase = Complex64::new(0.0, -lambda * k as f64).exp();
            acc += seq.eval(k).unwrap() * phase;
        }
        let got = acc / n as f64;
        assert!((got - Complex64::new(cre, cim)).norm() < 1e-3, "lambda={lambda} got={got}");
    }
}

#[test]
fn almost_periodic_rejects_bad_specs() {
    assert!(AlmostPeriodicSpec::new(vec![]).is_err());
    assert!(AlmostPeriodicSpec::new(vec![(0.1, (1.0, 0.0)), (0.1, (2.0, 0.0))]).is_err());
}

#[test]
fn integer_pattern_cycles() {
    let seq = integer_stationary_seq(IntegerModel::Pattern { pattern: vec![1, 2] }, 0).unwrap();
    let sample = seq.integer_sample(8).unwrap();
    assert_eq!(sample, vec![1, 2, 1, 2, 1, 2, 1, 2]);

    let c = integer_stationary_seq(IntegerModel::Pattern { pattern: vec![3] }, 0).unwrap();
    assert_eq!(c.integer_sample(5).unwrap(), vec![3; 5]);
}

#[test]
fn integer_iid_moments() {
    let seq =
        integer_stationary_seq(IntegerModel::Iid { alphabet: vec![0, 1] }, 99).unwrap();
    let n = 100_000usize;
    let sample = seq.integer_sample(n).unwrap();
    let mean: f64 = sample.iter().map(|&v| v as f64).sum::<f64>() / n as f64;
    assert!((mean - 0.5).abs() < 0.01);
    // Mean-subtracted: 1/4 at lag 0, ~0 at lag 1.
    let var: f64 =
        sample.iter().map(|&v| (v as f64 - mean) * (v as f64 - mean)).sum::<f64>() / n as f64;
    assert!((var - 0.25).abs() < 0.01);
    let cov1: f64 = (0..n - 1)
        .map(|i| (sample[i] as f64 - mean) * (sample[i + 1] as f64 - mean))
        .sum::<f64>()
        / (n - 1) as f64;
    assert!(cov1.abs() < 3.0 * 0.25 / (n as f64).sqrt() + 0.005);
}

#[test]
fn markov_validation() {
    let ok = IntegerModel::Markov {
        outputs: vec![0, 1],
        transition: vec![vec![0.5, 0.5], vec![0.25, 0.75]],
        n_max: 100,
    };
    assert!(integer_stationary_seq(ok, 1).is_ok());

    let reducible = IntegerModel::Markov {
        outputs: vec![0, 1],
        transition: vec![vec![1.0, 0.0], vec![0.5, 0.5]],
        n_max: 100,
    };
    assert!(integer_stationary_seq(reducible, 1).is_err());

    let not_stochastic = IntegerModel::Markov {
        outputs: vec![0, 1],
        transition: vec![vec![0.7, 0.7], vec![0.5, 0.5]],
        n_max: 100,
    };
    assert!(integer_stationary_seq(not_stochastic, 1).is_err());
}

#[test]
fn autocovariance_examples() {
    let one = constant_one();
    for m in [0usize, 1, 5] {
        assert!((one.autocovariance(m, 1000).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }
    let alt = alternating();
    assert!((alt.autocovariance(1, 1000).unwrap() - Complex64::new(-1.0, 0.0)).norm() < 1e-12);

    // Gaussian two-atom model: time-average autocorrelation at lag 2 is
    // -(|z0|^2 + |z1|^2)/2 + O(N^{-1/2}); its mean over seeds is cos(pi) = -1.
    let rho = SpectralMeasure::equal_atoms(&[PI / 2.0, -PI / 2.0]).unwrap();
    let seeds = 60u64;
    let mut acc = Complex64::new(0.0, 0.0);
    for s in 0..seeds {
        let seq = gaussian_stationary_seq(&rho, 1200, 500 + s).unwrap();
        acc += seq.autocovariance(2, 1000).unwrap();
    }
    let mean = acc / seeds as f64;
    // Var(|zeta|^2) = 1, so the seed-mean has sd ~ 1/sqrt(2 * seeds).
    let band = 4.0 / (2.0 * seeds as f64).sqrt() + 0.05;
    assert!((mean - Complex64::new(-1.0, 0.0)).norm() < band, "mean={mean}");
}

#[test]
fn autocovariance_needs_enough_realization() {
    let rho = SpectralMeasure::dirac(0.0);
    let seq = gaussian_stationary_seq(&rho, 50, 1).unwrap();
    assert!(seq.autocovariance(10, 45).is_err());
    assert!(seq.autocovariance(10, 40).is_ok());
}

#[test]
fn literal_zero_extension() {
    // (1, 1, 0, 0, ...): F = 1 + z.
    let seq = literal_seq(vec![(1.0, 0.0), (1.0, 0.0)], LiteralExtend::Zero).unwrap();
    assert_eq!(seq.eval(0).unwrap(), Complex64::new(1.0, 0.0));
    assert_eq!(seq.eval(1).unwrap(), Complex64::new(1.0, 0.0));
    assert_eq!(seq.eval(2).unwrap(), Complex64::new(0.0, 0.0));
    assert_eq!(seq.eval(999).unwrap(), Complex64::new(0.0, 0.0));
}

#[test]
fn evaluation_is_bit_deterministic() {
    let q = PhasePolynomial::new(vec![exact("sqrt(2)")]).unwrap();
    let a = polynomial_phase_seq(q.clone()).unwrap();
    let b = polynomial_phase_seq(q).unwrap();
    for n in [0i64, 17, 123_456] {
        let va = a.eval(n).unwrap();
        let vb = b.eval(n).unwrap();
        assert_eq!(va.re.to_bits(), vb.re.to_bits());
        assert_eq!(va.im.to_bits(), vb.im.to_bits());
    }
}
