use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use proptest::prelude::*;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use bgbs::matrix_core::{permanent, sample_gaussian_matrix, ComplexMatrix, RngStream};
use bgbs::repetition_reduction::{interpolate_constant, recover_permanent, RepetitionEmbedding};

fn patterns(c: usize) -> Vec<Vec<usize>> {
    (0..3usize.pow(c as u32))
        .map(|mut code| {
            (0..c)
                .map(|_| {
                    let d = code % 3 + 1;
                    code /= 3;
                    d
                })
                .collect()
        })
        .collect()
}

/// Two-sided Kolmogorov–Smirnov statistic against `N(0, var)`.
fn ks_statistic(mut sample: Vec<f64>, var: f64) -> f64 {
    let normal = Normal::new(0.0, var.sqrt()).unwrap();
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    sample
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = normal.cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn unit_circle_entries_are_standard_complex_normal() {
    let (s, t) = (vec![2usize, 1], vec![1usize, 2]);
    let z = Complex64::from_polar(1.0, 0.7);
    let draws = 10_000u64;
    let samples: Vec<ComplexMatrix> = (0..draws)
        .into_par_iter()
        .map(|i| {
            let stream = RngStream::new(404, i);
            let a = sample_gaussian_matrix(2, 2, 0.0, 1.0, stream).unwrap();
            RepetitionEmbedding::sample(a, s.clone(), t.clone(), stream.offset(1 << 40)).unwrap().b(z)
        })
        .collect();
    let (rows, cols) = (samples[0].rows(), samples[0].cols());
    // 1.628 / sqrt(n) is the 1% critical value of the KS statistic.
    let critical = 1.628 / (draws as f64).sqrt();
    for i in 0..rows {
        for j in 0..cols {
            let re = ks_statistic(samples.iter().map(|b| b[(i, j)].re).collect(), 0.5);
            let im = ks_statistic(samples.iter().map(|b| b[(i, j)].im).collect(), 0.5);
            assert!(re < critical && im < critical, "entry ({i}, {j}): D = {re:.4}, {im:.4} vs {critical:.4}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interpolation_never_amplifies_noise(
        coeffs in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..8),
        eps in 1e-6f64..1e-1,
        phase_seed in 0.0f64..10.0,
    ) {
        let k = coeffs.len() - 1;
        let poly: Vec<Complex64> = coeffs.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let noisy = |z: Complex64| {
            let exact = poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
            exact + Complex64::from_polar(eps, phase_seed * (1.0 + z.arg()))
        };
        let got = interpolate_constant(noisy, k);
        prop_assert!((got - poly[0]).norm() <= eps * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn adversarial_constant_noise_is_not_exceeded(k in 0usize..8, eps in 1e-6f64..1.0) {
        // Noise aligned with the constant term is the worst case and is passed through unchanged.
        let got = interpolate_constant(|_| Complex64::new(eps, 0.0), k);
        prop_assert!((got.norm() - eps).abs() <= 1e-12);
    }
}

/// The root-of-unity average recovers a constant term that can sit ten orders
/// below the values it averages. An oracle whose `n × n` products each carry
/// `n·ε` relative rounding therefore leaves `n·ε·(k+1)·max|P(ω)| / |ξ·Per(a)|`
/// of relative error. The identity is held to 1e-8 on top of that floor,
/// and the floor is measured per case.
#[test]
fn recovery_is_identity_on_the_full_grid() {
    let mut cases = Vec::new();
    for c in 1..=4usize {
        for s in patterns(c) {
            for t in patterns(c) {
                cases.push((c, s.clone(), t));
            }
        }
    }
    let outcomes: Vec<(f64, f64)> = cases
        .par_iter()
        .enumerate()
        .map(|(i, (c, s, t))| {
            let stream = RngStream::new(505, i as u64);
            let a = sample_gaussian_matrix(*c, *c, 0.0, 1.0, stream).unwrap();
            let peak = AtomicU64::new(0);
            let oracle = |m: &ComplexMatrix| {
                let p = permanent(m)?;
                peak.fetch_max(p.norm().to_bits(), Ordering::Relaxed);
                Ok(p)
            };
            let r = recover_permanent(&a, s, t, oracle, stream.offset(1 << 40)).unwrap();
            assert_eq!(r.oracle_calls, s.iter().chain(t).map(|x| x - 1).sum::<usize>() + 1);
            let expect = permanent(&a).unwrap();
            let peak = f64::from_bits(peak.into_inner());
            let n = (c + r.oracle_calls - 1) as f64;
            let floor = n * f64::EPSILON * r.oracle_calls as f64 * peak / (r.xi * expect).norm();
            ((r.estimate - expect).norm() / expect.norm(), floor)
        })
        .collect();
    let strict = outcomes.iter().filter(|(err, _)| *err <= 1e-8).count();
    for (i, (err, floor)) in outcomes.iter().enumerate() {
        assert!(*err <= 1e-8 + floor, "case {:?}: error {err:.3e}, round-off floor {floor:.3e}", cases[i]);
    }
    eprintln!("{strict} of {} patterns within 1e-8 outright", outcomes.len());
}
