use num_complex::Complex64;
use proptest::prelude::*;

use bgbs::covariance_stats::{click_moments_exact, husimi_blocks};
use bgbs::gbs_encoding::{
    compositions, encode, exact_sector_mass, mean_pairs_of_sigma, mean_photon_pairs, outcome_probability,
    pair_number_distribution, rescale_to_mean_pairs, PhotonPattern, TransitionMatrix,
};
use bgbs::matrix_core::{permanent, sample_gaussian_matrix, submatrix_repeat, svd, ComplexMatrix, RngStream};

/// Gaussian `m × m` matrix scaled so its largest singular value is `smax`.
fn program(m: usize, smax: f64, seed: u64) -> TransitionMatrix {
    let c = sample_gaussian_matrix(m, m, 0.0, 1.0, RngStream::new(seed, 0)).unwrap();
    let top = svd(&c).unwrap().sigma[0];
    encode(&c.scale_real(smax / top)).unwrap()
}

fn permuted(c: &ComplexMatrix, p: &[usize], q: &[usize]) -> ComplexMatrix {
    ComplexMatrix::from_fn(c.rows(), c.cols(), |i, j| c[(p[i], q[j])])
}

fn permutation(m: usize, code: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..m).collect();
    let mut code = code;
    let mut out = Vec::with_capacity(m);
    for k in (1..=m).rev() {
        out.push(pool.remove(code % k));
        code /= k;
    }
    out
}

/// Click moments by summing over every outcome with at most `n_max` pairs.
fn enumerated_clicks(tm: &TransitionMatrix, n_max: usize) -> (f64, f64, f64, f64) {
    let m = tm.modes();
    let (mut e_d, mut e_d2, mut e_de, mut e_e) = (0.0, 0.0, 0.0, 0.0);
    for n in 0..=n_max {
        let halves = compositions(n, m);
        for s in &halves {
            for t in &halves {
                let p = outcome_probability(tm, &PhotonPattern::new(s.clone(), t.clone())).unwrap();
                let d = s.iter().filter(|&&k| k > 0).count() as f64;
                let e = t.iter().filter(|&&k| k > 0).count() as f64;
                e_d += p * d;
                e_e += p * e;
                e_d2 += p * d * d;
                e_de += p * d * e;
            }
        }
    }
    (e_d, e_d2 - e_d * e_d, e_de - e_d * e_e, e_e)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sector_masses_match_pair_distribution(m in 1usize..=3, smax in 0.05f64..0.6, seed in 0u64..1000) {
        let tm = program(m, smax, seed);
        let dist = pair_number_distribution(&tm, 4);
        for (n, p) in dist.iter().enumerate() {
            prop_assert!((exact_sector_mass(&tm, n).unwrap() - p).abs() <= 1e-9);
        }
    }

    #[test]
    fn pair_distribution_is_normalised(m in 1usize..=6, smax in 0.05f64..0.8, seed in 0u64..1000) {
        let tm = program(m, smax, seed);
        let dist = pair_number_distribution(&tm, 400);
        prop_assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let mean: f64 = dist.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
        prop_assert!((mean - mean_photon_pairs(&tm)).abs() < 1e-9 * mean.max(1.0));
    }

    #[test]
    fn rescaling_is_monotone(m in 1usize..=5, seed in 0u64..1000, a in 0.05f64..3.0, b in 0.05f64..3.0) {
        prop_assume!((a - b).abs() > 1e-6);
        let c = sample_gaussian_matrix(m, m, 0.0, 1.0, RngStream::new(seed, 1)).unwrap();
        let (la, ta) = rescale_to_mean_pairs(&c, a).unwrap();
        let (lb, tb) = rescale_to_mean_pairs(&c, b).unwrap();
        prop_assert!((mean_photon_pairs(&ta) - a).abs() <= 1e-9 * a);
        prop_assert!((mean_photon_pairs(&tb) - b).abs() <= 1e-9 * b);
        prop_assert_eq!(a < b, la < lb);
        let sigma = svd(&c).unwrap().sigma;
        let at = |l: f64| mean_pairs_of_sigma(&sigma.iter().map(|s| s * l).collect::<Vec<_>>());
        let (lo, hi) = (la.min(lb), la.max(lb));
        prop_assert!(at(lo) < at(0.5 * (lo + hi)) && at(0.5 * (lo + hi)) < at(hi));
    }

    #[test]
    fn hiding_permutations_preserve_probabilities(
        m in 2usize..=4,
        seed in 0u64..1000,
        pc in 0usize..24,
        qc in 0usize..24,
        s_raw in proptest::collection::vec(0usize..=2, 4),
        rot in 0usize..4,
    ) {
        let tm = program(m, 0.7, seed);
        let (p, q) = (permutation(m, pc), permutation(m, qc));
        let moved = encode(&permuted(tm.matrix(), &p, &q)).unwrap();
        let s: Vec<usize> = s_raw[..m].to_vec();
        let n: usize = s.iter().sum();
        let mut t = vec![0; m];
        for k in 0..n {
            t[(k * 3 + rot) % m] += 1;
        }
        let sp: Vec<usize> = p.iter().map(|&i| s[i]).collect();
        let tq: Vec<usize> = q.iter().map(|&j| t[j]).collect();
        let before = outcome_probability(&tm, &PhotonPattern::new(s, t)).unwrap();
        let after = outcome_probability(&moved, &PhotonPattern::new(sp, tq)).unwrap();
        prop_assert!((before - after).abs() <= 1e-12 * before.max(1e-300), "{before} vs {after}");
    }

    #[test]
    fn husimi_traces_and_norms(m in 1usize..=6, smax in 0.05f64..0.9, seed in 0u64..1000) {
        let tm = program(m, smax, seed);
        let hb = husimi_blocks(&tm);
        let pairs = mean_photon_pairs(&tm);
        prop_assert!((hb.x.trace().re - m as f64 - pairs).abs() < 1e-9 * pairs.max(1.0));
        prop_assert!((hb.y.trace().re - m as f64 - pairs).abs() < 1e-9 * pairs.max(1.0));
        let occ: f64 = tm.sigma().iter().map(|s| (1.0 / (1.0 - s * s)).powi(2)).sum();
        let cross: f64 = tm.sigma().iter().map(|s| (s / (1.0 - s * s)).powi(2)).sum();
        prop_assert!((hb.x.frobenius_norm().powi(2) - occ).abs() < 1e-9 * occ);
        prop_assert!((hb.y.frobenius_norm().powi(2) - occ).abs() < 1e-9 * occ);
        prop_assert!((hb.w.frobenius_norm().powi(2) - cross).abs() < 1e-9 * cross.max(1e-12));
        let cm = click_moments_exact(&hb).unwrap();
        prop_assert_eq!(cm.var_sum, cm.var_d + cm.var_e + 2.0 * cm.cov_de);
    }

    #[test]
    fn click_moments_match_enumeration(m in 1usize..=3, smax in 0.05f64..0.35, seed in 0u64..1000) {
        let tm = program(m, smax, seed);
        let n_max = 8;
        let tail = 1.0 - pair_number_distribution(&tm, n_max).iter().sum::<f64>();
        let (mean_d, var_d, cov_de, mean_e) = enumerated_clicks(&tm, n_max);
        let cm = click_moments_exact(&husimi_blocks(&tm)).unwrap();
        let mf = m as f64;
        let slack = 1e-10 + 4.0 * mf * mf * tail;
        prop_assert!((cm.mean_d - mean_d).abs() <= slack, "{} vs {mean_d}", cm.mean_d);
        prop_assert!((cm.mean_e - mean_e).abs() <= slack);
        prop_assert!((cm.var_d - var_d).abs() <= slack, "{} vs {var_d}", cm.var_d);
        prop_assert!((cm.cov_de - cov_de).abs() <= slack, "{} vs {cov_de}", cm.cov_de);
    }
}

#[test]
fn scattershot_ratio_is_pattern_independent() {
    let m = 3;
    let g = sample_gaussian_matrix(m, m, 0.0, 1.0, RngStream::new(77, 0)).unwrap();
    let u = svd(&g).unwrap().u;
    let sigma = 0.4;
    let tm = encode(&u.scale_real(sigma)).unwrap();
    for n in 1..=3usize {
        let halves = compositions(n, m);
        let mut ratios = Vec::new();
        for s in &halves {
            for t in &halves {
                let per = permanent(&submatrix_repeat(&u, s, t).unwrap()).unwrap().norm_sqr();
                if per < 1e-8 {
                    continue;
                }
                let fact: f64 = s.iter().chain(t).map(|&k| (1..=k).product::<usize>() as f64).product();
                let p = outcome_probability(&tm, &PhotonPattern::new(s.clone(), t.clone())).unwrap();
                ratios.push(p * fact / per);
            }
        }
        let expect = sigma.powi(2 * n as i32) * (1.0 - sigma * sigma).powi(m as i32);
        for r in ratios {
            assert!((r / expect - 1.0).abs() < 1e-9, "n={n}: {r} vs {expect}");
        }
    }
}

#[test]
fn scalar_husimi_blocks() {
    let tm = encode(&ComplexMatrix::from_fn(1, 1, |_, _| Complex64::new(0.5, 0.0))).unwrap();
    let hb = husimi_blocks(&tm);
    assert!((hb.x[(0, 0)].re - 4.0 / 3.0).abs() < 1e-14);
    assert!((hb.y[(0, 0)].re - 4.0 / 3.0).abs() < 1e-14);
    assert!((hb.w[(0, 0)].norm() - 2.0 / 3.0).abs() < 1e-14);
}

#[test]
fn vacuum_program_has_no_clicks() {
    let tm = encode(&ComplexMatrix::zeros(3, 3)).unwrap();
    let cm = click_moments_exact(&husimi_blocks(&tm)).unwrap();
    assert_eq!(cm.mean_d, 0.0);
    assert_eq!(cm.var_sum, 0.0);
}
