use bgbs::ensemble_mc::run_click_experiment;
use bgbs::wishart_bounds::{
    i_ratio_sweep, sample_wishart, wishart_ensemble, wishart_trace_moment, z_inverse_expectation,
    z_inverse_expectation_detailed, AlphaSpec, EdelmanMethod,
};
use bgbs::RngStream;
use proptest::prelude::*;

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn click_ensemble_is_a_pure_function_of_its_inputs() {
    let one = in_pool(1, || run_click_experiment(12, 0.2, 24, 99).unwrap());
    let many = in_pool(4, || run_click_experiment(12, 0.2, 24, 99).unwrap());
    assert_eq!(one, many);
    let other = run_click_experiment(12, 0.2, 24, 100).unwrap();
    assert_ne!(one.per_trial, other.per_trial);
}

#[test]
fn error_bars_shrink_with_trials() {
    let small = run_click_experiment(8, 0.25, 200, 7).unwrap();
    let large = run_click_experiment(8, 0.25, 800, 8).unwrap();
    let ratio = small.mean_d.std_error() / large.mean_d.std_error();
    assert!((ratio - 2.0).abs() < 0.4, "standard-error ratio {ratio}");
}

#[test]
fn wishart_ensemble_is_thread_count_invariant() {
    let one = in_pool(1, || wishart_ensemble(10, 3.0, 16, 5).unwrap());
    let many = in_pool(3, || wishart_ensemble(10, 3.0, 16, 5).unwrap());
    assert_eq!(one, many);
}

#[test]
fn trace_moment_closed_forms() {
    for &(m, alpha) in &[(20usize, 3.0f64), (50, 6.0), (7, 1.5)] {
        let a2 = alpha * alpha;
        let expect = [m as f64 / a2, 2.0 * m as f64 / (a2 * a2), (5.0 * (m * m) as f64 + 1.0) / (a2 * a2 * a2 * m as f64)];
        for (k, e) in (1..=3u32).zip(expect) {
            let got = wishart_trace_moment(m, alpha, k).unwrap();
            assert!((got / e - 1.0).abs() < 1e-12, "m={m} alpha={alpha} k={k}: {got} vs {e}");
        }
    }
}

#[test]
fn single_mode_edelman_value() {
    for alpha in [1.5, 3.0, 10.0] {
        let got = z_inverse_expectation(1, alpha).unwrap();
        assert_eq!(got, (1.0 - 1.0 / (alpha * alpha)).ln());
    }
}

#[test]
fn i_ratio_is_finite_at_a_million_modes() {
    let pts = i_ratio_sweep(AlphaSpec::Fixed(3.0), &[1_000_000]).unwrap();
    assert!(pts[0].log_i.is_finite() && pts[0].log_z.is_finite());
    let pts = i_ratio_sweep(AlphaSpec::Power { coefficient: 2.0, exponent: 0.25 }, &[1_000_000]).unwrap();
    assert!(pts[0].log_i.is_finite());
}

#[test]
fn wishart_eigenvalues_are_non_negative() {
    let ws = sample_wishart(12, 3.0, RngStream::new(1, 2)).unwrap();
    assert_eq!(ws.eigenvalues.len(), 12);
    assert!(ws.eigenvalues.iter().all(|&e| e >= -1e-12));
}

/// `Σᵢ (-1)ⁱ C(m,i)² i! xⁱ` summed naively, with its cancellation ratio.
fn naive_edelman(m: usize, alpha: f64) -> (f64, f64) {
    let x = 1.0 / (alpha * alpha * m as f64);
    let mut term = 1.0f64;
    let (mut sum, mut abs) = (1.0, 1.0);
    for i in 1..=m {
        // C(m,i)² i! xⁱ from the previous term.
        let r = (m + 1 - i) as f64 / i as f64;
        term *= r * r * i as f64 * x;
        sum += if i % 2 == 1 { -term } else { term };
        abs += term;
    }
    (sum, abs / sum)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edelman_matches_naive_sum(m in 2usize..=14, alpha in 1.2f64..12.0) {
        let (sum, ratio) = naive_edelman(m, alpha);
        prop_assume!(sum > 0.0 && ratio < 1e3);
        let got = z_inverse_expectation(m, alpha).unwrap();
        prop_assert!((got - sum.ln()).abs() <= 1e-11 * ratio, "{got} vs {}", sum.ln());
    }

    // Beyond alpha = 2 the Laguerre argument clears every zero, so E[1/Z] > 0.
    #[test]
    fn edelman_increases_with_alpha(m in 2usize..400, alpha in 2.0f64..10.0, step in 0.01f64..2.0) {
        let lo = z_inverse_expectation_detailed(m, alpha).unwrap();
        let hi = z_inverse_expectation_detailed(m, alpha + step).unwrap();
        prop_assert!(lo.log_value < 0.0 && hi.log_value < 0.0);
        prop_assert!(lo.log_value < hi.log_value, "{:?} then {:?}", lo, hi);
    }
}

#[test]
fn large_m_uses_the_recurrence() {
    let v = z_inverse_expectation_detailed(50_000, 3.0).unwrap();
    assert_eq!(v.method, EdelmanMethod::LaguerreRecurrence);
    assert!(v.log_value.is_finite() && v.log_value < 0.0);
}

#[test]
fn sub_critical_alpha_can_be_refused() {
    // With alpha < 2 the spectrum crosses 1 and E[det(1 - A)] may be negative.
    assert!(z_inverse_expectation(125, 1.652780664293108).is_err());
}
