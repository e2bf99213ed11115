//! Monte Carlo over Gaussian transition matrices.
//!
//! Trial `i` always draws from stream `(seed, i)`, so reports do not depend on
//! how many threads run the trials.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covariance_stats::{analytic_click_mean, analytic_click_variances, click_moments_exact, husimi_blocks, ClickMoments};
use crate::error::{invalid, Error, Result};
use crate::gbs_encoding::{rescale_to_mean_pairs, TransitionMatrix};
use crate::matrix_core::{sample_gaussian_matrix, RngStream};
use crate::stats::Summary;
use crate::wishart_bounds::{boundn_count_rhs, boundn_mean_rhs, sample_wishart, TailCheck};

/// Streams for retries sit this far past the trial index.
const RETRY_STRIDE: u64 = 1 << 32;
const MAX_RETRIES: u64 = 8;

/// Ensemble statistics of click moments at fixed `(m, μ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub m: usize,
    pub mu: f64,
    pub trials: usize,
    pub seed: u64,
    pub retries: usize,
    pub per_trial: Vec<ClickMoments>,
    /// Spread of `⟨d⟩` across matrices.
    pub mean_d: Summary,
    /// Spread of `Δ²d` across matrices.
    pub var_d: Summary,
    /// Spread of `Δ²(d+e)` across matrices.
    pub var_sum: Summary,
}

/// One CSV row: ensemble averages, their spreads, and the analytic predictions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClickStatsRow {
    pub m: usize,
    pub mu: f64,
    pub trials: usize,
    pub mean_d: f64,
    pub sd_mean_d: f64,
    pub var_d: f64,
    pub sd_var_d: f64,
    pub var_sum: f64,
    pub sd_var_sum: f64,
    pub theory_mean_d: f64,
    pub theory_var_d: f64,
    pub theory_var_sum: f64,
}

impl EnsembleReport {
    pub fn row(&self) -> ClickStatsRow {
        let m = self.m as f64;
        let theory = analytic_click_variances(m, self.mu);
        ClickStatsRow {
            m: self.m,
            mu: self.mu,
            trials: self.trials,
            mean_d: self.mean_d.mean,
            sd_mean_d: self.mean_d.std_dev(),
            var_d: self.var_d.mean,
            sd_var_d: self.var_d.std_dev(),
            var_sum: self.var_sum.mean,
            sd_var_sum: self.var_sum.std_dev(),
            theory_mean_d: analytic_click_mean(m, self.mu),
            theory_var_d: theory.var_d,
            theory_var_sum: theory.var_sum,
        }
    }
}

fn one_trial(m: usize, mu: f64, seed: u64, index: u64) -> Result<(ClickMoments, usize)> {
    let mut last = None;
    for attempt in 0..=MAX_RETRIES {
        let stream = RngStream::new(seed, index.wrapping_add(attempt * RETRY_STRIDE));
        let outcome = sample_gaussian_matrix(m, m, 0.0, 1.0, stream)
            .and_then(|c| rescale_to_mean_pairs(&c, mu * m as f64))
            .and_then(|(_, tm)| click_moments_exact(&husimi_blocks(&tm)));
        match outcome {
            Ok(cm) => return Ok((cm, attempt as usize)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt ran"))
}

/// Samples `C ~ N(0,1)^{m×m}`, fixes `⟨n⟩ = μm`, and computes exact click
/// moments, once per trial.
pub fn run_click_experiment(m: usize, mu: f64, trials: usize, seed: u64) -> Result<EnsembleReport> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(invalid("mu", format!("photon density must lie in (0, 1), got {mu}")));
    }
    if trials < 2 {
        return Err(invalid("trials", "need at least two trials for a variance"));
    }
    if m == 0 {
        return Err(invalid("m", "need at least one mode"));
    }
    let results: Vec<(ClickMoments, usize)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| one_trial(m, mu, seed, i))
        .collect::<Result<_>>()?;
    let retries = results.iter().map(|r| r.1).sum();
    let per_trial: Vec<ClickMoments> = results.into_iter().map(|r| r.0).collect();
    Ok(EnsembleReport {
        m,
        mu,
        trials,
        seed,
        retries,
        mean_d: Summary::of(per_trial.iter().map(|c| c.mean_d)),
        var_d: Summary::of(per_trial.iter().map(|c| c.var_d)),
        var_sum: Summary::of(per_trial.iter().map(|c| c.var_sum)),
        per_trial,
    })
}

/// Pairs emitted by each squeezer: `nᵢ ~ Geometric` with `Pr(nᵢ) = (1-σᵢ²)σᵢ^{2nᵢ}`.
pub fn sample_pair_numbers(tm: &TransitionMatrix, rng: RngStream) -> Vec<u64> {
    sample_pairs_from_sigma(tm.sigma(), rng)
}

fn sample_pairs_from_sigma(sigma: &[f64], rng: RngStream) -> Vec<u64> {
    let mut g = rng.generator();
    sigma.iter().map(|s| g.geometric(s * s)).collect()
}

/// Violation frequencies of both photon-number concentration bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub m: usize,
    pub alpha: f64,
    pub delta: f64,
    pub mean: TailCheck,
    pub count: TailCheck,
}

/// Draws Wishart programs and photon numbers, counting how often `⟨n⟩` and
/// `n` stray from `m/α²` by more than the concentration bounds allow.
pub fn n_concentration_check(m: usize, alpha: f64, trials: usize, delta: f64, seed: u64) -> Result<ConcentrationReport> {
    let mean_rhs = boundn_mean_rhs(m, alpha, delta)?;
    let count_rhs = boundn_count_rhs(m, alpha, delta)?;
    if trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    let centre = m as f64 / (alpha * alpha);
    let flags: Vec<(bool, bool)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let ws = sample_wishart(m, alpha, RngStream::new(seed, i))?;
            if ws.eigenvalues.iter().any(|&l| l >= 1.0) {
                return Ok((true, true));
            }
            let mean: f64 = ws.eigenvalues.iter().map(|l| l / (1.0 - l)).sum();
            let sigma: Vec<f64> = ws.eigenvalues.iter().map(|l| l.sqrt()).collect();
            let n: u64 = sample_pairs_from_sigma(&sigma, RngStream::new(seed, i.wrapping_add(RETRY_STRIDE)))
                .iter()
                .sum();
            Ok::<_, Error>(((mean - centre).abs() >= mean_rhs, (n as f64 - centre).abs() >= count_rhs))
        })
        .collect::<Result<_>>()?;
    Ok(ConcentrationReport {
        m,
        alpha,
        delta,
        mean: TailCheck {
            name: "boundn_mean".into(),
            threshold: mean_rhs,
            bound: delta,
            trials,
            violations: flags.iter().filter(|f| f.0).count(),
        },
        count: TailCheck {
            name: "boundn_count".into(),
            threshold: count_rhs,
            bound: delta,
            trials,
            violations: flags.iter().filter(|f| f.1).count(),
        },
    })
}
