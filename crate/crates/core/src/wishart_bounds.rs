//! Wishart-ensemble closed forms and the random-matrix bounds behind the
//! hardness argument.
//!
//! Transition matrices are drawn as `C ~ N(0, 1/(α²m))^{m×m}`, so `A = CC†` is
//! complex Wishart and its eigenvalues are the squared singular values of `C`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::{ln_binomial, ln_factorial};
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Error, Result};
use crate::matrix_core::{sample_gaussian_matrix, singular_values, RngStream};
use crate::stats::{compensated_sum, linear_fit, Summary};

/// `β` at which the general bounds reduce to the constants 512 and 272.
pub const DEFAULT_BETA: f64 = 4.0;

/// How the scale `α` is chosen for a given `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AlphaSpec {
    Fixed(f64),
    /// `α = coefficient · m^exponent`.
    Power { coefficient: f64, exponent: f64 },
}

impl AlphaSpec {
    pub fn at(&self, m: usize) -> f64 {
        match *self {
            AlphaSpec::Fixed(a) => a,
            AlphaSpec::Power { coefficient, exponent } => coefficient * (m as f64).powf(exponent),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            AlphaSpec::Fixed(a) => format!("{a}"),
            AlphaSpec::Power { coefficient, exponent } => format!("{coefficient}m^{exponent}"),
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(invalid("alpha", format!("must be positive, got {alpha}")))
    }
}

/// `ln |(x)_k|` for the rising factorial, or `None` when it vanishes.
fn ln_rising(x: f64, k: u32) -> Option<f64> {
    let last = x + k as f64 - 1.0;
    if x > 0.0 {
        return Some(ln_gamma(x + k as f64) - ln_gamma(x));
    }
    if last >= 0.0 {
        // The product runs through zero.
        return None;
    }
    Some((0..k).map(|j| (x + j as f64).abs().ln()).sum())
}

/// `E[Tr Aᵏ]` from the Hanlon–Stanley–Stembridge alternating sum.
///
/// Uses `1/((k-i)!(i-1)!) = C(k-1, i-1)/(k-1)!`, so the sum is exact in
/// integers whenever it fits in `i128`; otherwise it is summed in floating point.
pub fn wishart_trace_moment(m: usize, alpha: f64, k: u32) -> Result<f64> {
    check_alpha(alpha)?;
    if k == 0 {
        return Err(invalid("k", "moment order must be at least 1"));
    }
    if m == 0 {
        return Err(invalid("m", "need at least one mode"));
    }
    let ln_var = -(alpha * alpha * m as f64).ln();
    let scale = (k as f64 * ln_var - (k as f64).ln() - ln_factorial((k - 1) as u64)).exp();
    if let Some(exact) = trace_moment_integer_sum(m as i128, k) {
        return Ok(exact as f64 * scale);
    }
    let terms = (1..=k).filter_map(|i| {
        let lr = ln_rising(m as f64 + 1.0 - i as f64, k)?;
        let mag = 2.0 * lr + ln_binomial((k - 1) as u64, (i - 1) as u64);
        let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
        Some(sign * mag.exp())
    });
    Ok(compensated_sum(terms).0 * scale)
}

/// `Σᵢ (-1)^{i-1} C(k-1, i-1) ((m+1-i)_k)²`, or `None` on overflow.
fn trace_moment_integer_sum(m: i128, k: u32) -> Option<i128> {
    let mut total: i128 = 0;
    let mut binom: i128 = 1;
    for i in 1..=k as i128 {
        let x = m + 1 - i;
        let mut rising: i128 = 1;
        for j in 0..k as i128 {
            rising = rising.checked_mul(x + j)?;
        }
        let term = rising.checked_mul(rising)?.checked_mul(binom)?;
        total = if i % 2 == 1 { total.checked_add(term)? } else { total.checked_sub(term)? };
        binom = binom.checked_mul(k as i128 - i)? / i;
    }
    Some(total)
}

/// Which evaluation path produced an `E[Z⁻¹]` value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdelmanMethod {
    DirectSum,
    LaguerreRecurrence,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdelmanValue {
    /// `ln E[Z⁻¹]`.
    pub log_value: f64,
    pub method: EdelmanMethod,
}

// Relative error estimate above which the direct alternating sum is abandoned.
const CANCELLATION_LIMIT: f64 = 1e-6;

/// `ln E[Z⁻¹]` over the Wishart ensemble, from Edelman's formula
/// `E[Z⁻¹] = Σᵢ (-1)ⁱ C(m,i)² i! xⁱ` with `x = 1/(α²m)`.
pub fn z_inverse_expectation(m: usize, alpha: f64) -> Result<f64> {
    z_inverse_expectation_detailed(m, alpha).map(|v| v.log_value)
}

pub fn z_inverse_expectation_detailed(m: usize, alpha: f64) -> Result<EdelmanValue> {
    check_alpha(alpha)?;
    if m == 0 {
        return Err(invalid("m", "need at least one mode"));
    }
    if m == 1 {
        let v = 1.0 - 1.0 / (alpha * alpha);
        return positive_log(v, EdelmanMethod::DirectSum);
    }
    let ln_x = -(alpha * alpha * m as f64).ln();
    let log_terms: Vec<f64> = (0..=m as u64)
        .map(|i| 2.0 * ln_binomial(m as u64, i) + ln_factorial(i) + i as f64 * ln_x)
        .collect();
    let peak = log_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if peak < 600.0 {
        let (sum, abs) = compensated_sum(
            log_terms
                .iter()
                .enumerate()
                .map(|(i, lt)| if i % 2 == 0 { lt.exp() } else { -lt.exp() }),
        );
        if sum > 0.0 && f64::EPSILON * abs / sum <= CANCELLATION_LIMIT {
            return positive_log(sum, EdelmanMethod::DirectSum);
        }
    }
    laguerre_path(m, alpha)
}

fn positive_log(v: f64, method: EdelmanMethod) -> Result<EdelmanValue> {
    if v > 0.0 {
        Ok(EdelmanValue {
            log_value: v.ln(),
            method,
        })
    } else {
        Err(Error::Numeric(format!("E[1/Z] evaluated to non-positive {v}")))
    }
}

/// `E[Z⁻¹] = m! (-x)ᵐ L_m(1/x)`, with the Laguerre polynomial run forward by
/// its three-term recurrence under a running logarithmic scale.
fn laguerre_path(m: usize, alpha: f64) -> Result<EdelmanValue> {
    let t = alpha * alpha * m as f64;
    let (mut prev, mut cur) = (1.0f64, 1.0 - t);
    let mut ln_scale = 0.0f64;
    for n in 1..m {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 - t) * cur - nf * prev) / (nf + 1.0);
        prev = cur;
        cur = next;
        let mag = cur.abs();
        if mag > 1e100 || (mag < 1e-100 && mag > 0.0) {
            prev /= mag;
            cur /= mag;
            ln_scale += mag.ln();
        }
    }
    if cur == 0.0 || !cur.is_finite() {
        return Err(Error::Numeric("Laguerre recurrence lost all precision".into()));
    }
    let sign = if m.is_multiple_of(2) { cur.signum() } else { -cur.signum() };
    if sign <= 0.0 {
        return Err(Error::Numeric("E[1/Z] evaluated to a non-positive value".into()));
    }
    let ln_x = -t.ln();
    Ok(EdelmanValue {
        log_value: ln_factorial(m as u64) + m as f64 * ln_x + cur.abs().ln() + ln_scale,
        method: EdelmanMethod::LaguerreRecurrence,
    })
}

/// Eigenvalues of one Wishart draw `A = CC†`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WishartSample {
    pub m: usize,
    pub alpha: f64,
    pub eigenvalues: Vec<f64>,
}

impl WishartSample {
    pub fn trace_power(&self, k: i32) -> f64 {
        self.eigenvalues.iter().map(|l| l.powi(k)).sum()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().cloned().fold(0.0, f64::max)
    }
}

pub fn sample_wishart(m: usize, alpha: f64, rng: RngStream) -> Result<WishartSample> {
    check_alpha(alpha)?;
    if m == 0 {
        return Err(invalid("m", "need at least one mode"));
    }
    let c = sample_gaussian_matrix(m, m, 0.0, 1.0 / (alpha * alpha * m as f64), rng)?;
    let eigenvalues = singular_values(&c)?.into_iter().map(|s| s * s).collect();
    Ok(WishartSample { m, alpha, eigenvalues })
}

/// `ln Z = -Σ ln(1 - λᵢ)`.
pub fn z_from_sample(ws: &WishartSample) -> Result<f64> {
    if let Some(&bad) = ws.eigenvalues.iter().find(|&&l| l >= 1.0) {
        return Err(Error::InvalidProgram(bad));
    }
    Ok(-ws.eigenvalues.iter().map(|l| (-l).ln_1p()).sum::<f64>())
}

/// Quarter-circle prediction of `E⟨n⟩`, written to avoid cancellation at large `α`.
pub fn mean_pairs_expected(m: f64, alpha: f64) -> Result<f64> {
    if alpha.is_nan() || alpha <= 2.0 {
        return Err(invalid("alpha", format!("quarter-circle mean needs alpha > 2, got {alpha}")));
    }
    let root = (1.0 - 4.0 / (alpha * alpha)).sqrt();
    Ok(4.0 * m / (alpha * alpha * (1.0 + root).powi(2)))
}

/// One point of the `I` ratio scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IRatioPoint {
    pub m: usize,
    pub alpha: f64,
    pub n: usize,
    pub c: Option<usize>,
    #[serde(rename = "logZ")]
    pub log_z: f64,
    #[serde(rename = "logI")]
    pub log_i: f64,
}

/// `ln I = ln Z + 2n ln α + n ln m - ln|H| - ln n!`.
///
/// Without `c`, `|H| = C(m,n)²` (no collisions); with `c` clicks per half,
/// `|H| = C(m,c)² C(n-1,n-c)²`.
pub fn i_ratio(m: usize, alpha: f64, n: usize, c: Option<usize>, log_z: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if n > m {
        return Err(invalid("n", format!("{n} photons exceed {m} modes")));
    }
    let ln_h = match c {
        None => 2.0 * ln_binomial(m as u64, n as u64),
        Some(c) => {
            if c > n || (n > 0 && c == 0) {
                return Err(invalid("c", format!("{c} clicks incompatible with {n} photons")));
            }
            if n == 0 {
                0.0
            } else {
                2.0 * ln_binomial(m as u64, c as u64) + 2.0 * ln_binomial((n - 1) as u64, (n - c) as u64)
            }
        }
    };
    let nf = n as f64;
    Ok(log_z + 2.0 * nf * alpha.ln() + nf * (m as f64).ln() - ln_h - ln_factorial(n as u64))
}

/// Typical photon and click numbers for `(m, α)`, and whether collisions are
/// sparse enough for the reduction (`2(n - c) ≤ c`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionParams {
    pub n: usize,
    pub c: usize,
    pub reduction_feasible: bool,
}

pub fn collision_subspace_params(m: usize, alpha: f64) -> Result<CollisionParams> {
    let mf = m as f64;
    let n = mean_pairs_expected(mf, alpha)?.round();
    let mu = n / mf;
    let c = (mf * mu / (1.0 + mu)).round();
    Ok(CollisionParams {
        n: n as usize,
        c: c as usize,
        reduction_feasible: 2.0 * (n - c) <= c,
    })
}

/// `I` over a list of mode counts, in the collision subspace, with `Z ≈ 1/E[Z⁻¹]`.
pub fn i_ratio_sweep(alpha: AlphaSpec, ms: &[usize]) -> Result<Vec<IRatioPoint>> {
    ms.par_iter()
        .map(|&m| {
            let a = alpha.at(m);
            let p = collision_subspace_params(m, a)?;
            let log_z = -z_inverse_expectation(m, a)?;
            let log_i = i_ratio(m, a, p.n, Some(p.c), log_z)?;
            Ok(IRatioPoint {
                m,
                alpha: a,
                n: p.n,
                c: Some(p.c),
                log_z,
                log_i,
            })
        })
        .collect()
}

/// Least-squares slope of `ln I` against `ln m`.
pub fn log_log_slope(points: &[IRatioPoint]) -> f64 {
    let x: Vec<f64> = points.iter().map(|p| (p.m as f64).ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.log_i).collect();
    linear_fit(&x, &y).0
}

/// `count` integers log-spaced over `[lo, hi]`, deduplicated.
pub fn log_spaced(lo: usize, hi: usize, count: usize) -> Vec<usize> {
    if count <= 1 || lo == hi {
        return vec![lo];
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut out: Vec<usize> = (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp().round() as usize)
        .collect();
    out.dedup();
    out
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= 1.0 {
        Ok(())
    } else {
        Err(invalid("delta", format!("must lie in (0, 1], got {delta}")))
    }
}

/// Region where the `α ≥ 6` lemmas hold.
pub fn lemma_region(bound: &'static str, m: usize, alpha: f64, delta: f64) -> Result<()> {
    check_delta(delta)?;
    if alpha < 6.0 {
        return Err(Error::OutsideValidityRegion {
            bound,
            reason: format!("alpha = {alpha} < 6"),
        });
    }
    if (m as f64) < (1.0 / delta).ln() {
        return Err(Error::OutsideValidityRegion {
            bound,
            reason: format!("m = {m} < ln(1/delta)"),
        });
    }
    Ok(())
}

/// Region where the `β`-parameterised theorems hold.
pub fn theorem_region(bound: &'static str, m: usize, alpha: f64, delta: f64, beta: f64) -> Result<()> {
    check_delta(delta)?;
    let reason = if beta < 4.0 {
        Some(format!("beta = {beta} < 4"))
    } else if alpha * alpha < 8.0 * beta {
        Some(format!("alpha^2 = {} < 8 beta", alpha * alpha))
    } else if (m as f64) < (1.0 / delta).ln() / (beta * beta) {
        Some(format!("m = {m} < ln(1/delta)/beta^2"))
    } else {
        None
    };
    match reason {
        Some(reason) => Err(Error::OutsideValidityRegion { bound, reason }),
        None => Ok(()),
    }
}

/// Threshold on `|⟨n⟩ - m/α²|` exceeded with probability at most `δ`.
pub fn boundn_mean_rhs(m: usize, alpha: f64, delta: f64) -> Result<f64> {
    lemma_region("boundn (mean)", m, alpha, delta)?;
    Ok(mean_deviation(m, alpha, delta, DEFAULT_BETA))
}

/// Threshold on `|n - m/α²|` exceeded with probability at most `δ`.
pub fn boundn_count_rhs(m: usize, alpha: f64, delta: f64) -> Result<f64> {
    lemma_region("boundn (count)", m, alpha, delta)?;
    let (mf, a) = (m as f64, alpha);
    Ok(2.0 * mf.sqrt() / (a * delta.sqrt())
        + 3.0 / (a * delta.powf(0.75))
        + 84.0 * mf.sqrt() / (a * a * delta.sqrt())
        + 512.0 * mf / a.powi(4))
}

/// `ln` of the threshold on `Z` exceeded with probability at most `δ`.
pub fn boundz_log_rhs(m: usize, alpha: f64, delta: f64) -> Result<f64> {
    lemma_region("boundZ", m, alpha, delta)?;
    Ok(z_log_threshold(m, alpha, delta, 272.0))
}

fn mean_deviation(m: usize, alpha: f64, delta: f64, beta: f64) -> f64 {
    32.0 * beta * beta * m as f64 / alpha.powi(4) + (2.0 / delta).sqrt() / (alpha * alpha)
}

fn z_log_threshold(m: usize, alpha: f64, delta: f64, coefficient: f64) -> f64 {
    let mf = m as f64;
    (2.0 / delta).ln() + mf / (alpha * alpha) + coefficient * mf / alpha.powi(4)
}

/// General-`β` form of [`boundn_mean_rhs`].
pub fn mean_deviation_rhs(m: usize, alpha: f64, delta: f64, beta: f64) -> Result<f64> {
    theorem_region("mean photon deviation", m, alpha, delta, beta)?;
    Ok(mean_deviation(m, alpha, delta, beta))
}

/// General-`β` form of [`boundn_count_rhs`].
pub fn count_deviation_rhs(m: usize, alpha: f64, delta: f64, beta: f64) -> Result<f64> {
    theorem_region("photon count deviation", m, alpha, delta, beta)?;
    let (mf, a) = (m as f64, alpha);
    Ok(2.0 * mf.sqrt() / (a * delta.sqrt())
        + 3.0 / (a * delta.powf(0.75))
        + 21.0 * beta * mf.sqrt() / (a * a * delta.sqrt())
        + 32.0 * beta * beta * mf / a.powi(4))
}

/// General-`β` form of [`boundz_log_rhs`], with coefficient `17β²`.
pub fn z_log_rhs(m: usize, alpha: f64, delta: f64, beta: f64) -> Result<f64> {
    theorem_region("normalization", m, alpha, delta, beta)?;
    Ok(z_log_threshold(m, alpha, delta, 17.0 * beta * beta))
}

/// `m·exp(-mα⁴ε²/8)`, the tail of `λ_max(A) ≥ 4/α² + ε`.
pub fn max_eigenvalue_tail_bound(m: usize, alpha: f64, eps: f64) -> f64 {
    m as f64 * (-(m as f64) * alpha.powi(4) * eps * eps / 8.0).exp()
}

/// The `ε` at which [`max_eigenvalue_tail_bound`] equals `δ`.
pub fn max_eigenvalue_eps(m: usize, alpha: f64, delta: f64) -> f64 {
    (8.0 * (m as f64 / delta).ln().max(0.0) / (m as f64 * alpha.powi(4))).sqrt()
}

/// A named right-hand side, or the reason it is refused.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedBound {
    pub name: &'static str,
    pub value: Option<f64>,
    pub refusal: Option<String>,
}

impl NamedBound {
    fn from(name: &'static str, r: Result<f64>) -> Self {
        match r {
            Ok(v) => Self {
                name,
                value: Some(v),
                refusal: None,
            },
            Err(e) => Self {
                name,
                value: None,
                refusal: Some(e.to_string()),
            },
        }
    }
}

/// Every bound right-hand side at `(m, α, δ)`, with per-bound refusals.
pub fn bound_rhs_evaluators(m: usize, alpha: f64, delta: f64) -> Vec<NamedBound> {
    vec![
        NamedBound::from("boundn_mean", boundn_mean_rhs(m, alpha, delta)),
        NamedBound::from("boundn_count", boundn_count_rhs(m, alpha, delta)),
        NamedBound::from("boundz_log", boundz_log_rhs(m, alpha, delta)),
        NamedBound::from("mean_deviation_beta4", mean_deviation_rhs(m, alpha, delta, DEFAULT_BETA)),
        NamedBound::from("count_deviation_beta4", count_deviation_rhs(m, alpha, delta, DEFAULT_BETA)),
        NamedBound::from("z_log_beta4", z_log_rhs(m, alpha, delta, DEFAULT_BETA)),
        NamedBound::from(
            "max_eigenvalue_eps",
            check_delta(delta).map(|_| max_eigenvalue_eps(m, alpha, delta)),
        ),
    ]
}

/// Draws `trials` Wishart samples on streams `(seed, 0..trials)`.
pub fn wishart_ensemble(m: usize, alpha: f64, trials: usize, seed: u64) -> Result<Vec<WishartSample>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|i| sample_wishart(m, alpha, RngStream::new(seed, i)))
        .collect()
}

/// Ensemble averages against the closed-form trace lemmas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMomentReport {
    pub m: usize,
    pub alpha: f64,
    pub trials: usize,
    /// `Tr Aᵏ` for `k = 1, 2, 3`.
    pub trace_powers: [Summary; 3],
    pub trace_squared: Summary,
    pub exp_trace: Summary,
}

pub fn trace_moment_ensemble(m: usize, alpha: f64, trials: usize, seed: u64) -> Result<TraceMomentReport> {
    let samples = wishart_ensemble(m, alpha, trials, seed)?;
    let power = |k| Summary::of(samples.iter().map(|s| s.trace_power(k)));
    Ok(TraceMomentReport {
        m,
        alpha,
        trials,
        trace_powers: [power(1), power(2), power(3)],
        trace_squared: Summary::of(samples.iter().map(|s| s.trace_power(1).powi(2))),
        exp_trace: Summary::of(samples.iter().map(|s| s.trace_power(1).exp())),
    })
}

/// `E[(Tr A)²] = (m² + 1)/α⁴`.
pub fn trace_squared_expectation(m: usize, alpha: f64) -> f64 {
    ((m * m) as f64 + 1.0) / alpha.powi(4)
}

/// `E[exp Tr A] = (1 - 1/(α²m))^{-m²}`.
pub fn exp_trace_expectation(m: usize, alpha: f64) -> f64 {
    let mf = m as f64;
    (-(mf * mf) * (-1.0 / (alpha * alpha * mf)).ln_1p()).exp()
}

/// Empirical frequency of a tail event against its bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailCheck {
    pub name: String,
    pub threshold: f64,
    pub bound: f64,
    pub trials: usize,
    pub violations: usize,
}

impl TailCheck {
    pub fn frequency(&self) -> f64 {
        self.violations as f64 / self.trials as f64
    }

    pub fn holds(&self) -> bool {
        self.frequency() <= self.bound
    }
}

/// Frequency of `λ_max(A) ≥ 4/α² + ε`, with `ε` chosen so the bound equals `δ`.
pub fn max_eigenvalue_check(m: usize, alpha: f64, delta: f64, trials: usize, seed: u64) -> Result<TailCheck> {
    check_delta(delta)?;
    let eps = max_eigenvalue_eps(m, alpha, delta);
    let threshold = 4.0 / (alpha * alpha) + eps;
    let samples = wishart_ensemble(m, alpha, trials, seed)?;
    Ok(TailCheck {
        name: "max_eigenvalue".into(),
        threshold,
        bound: max_eigenvalue_tail_bound(m, alpha, eps).min(1.0),
        trials,
        violations: samples.iter().filter(|s| s.max_eigenvalue() >= threshold).count(),
    })
}

/// Frequency of `Z ≥ (2/δ) e^{m/α²} e^{272m/α⁴}`.
pub fn boundz_check(m: usize, alpha: f64, delta: f64, trials: usize, seed: u64) -> Result<TailCheck> {
    let threshold = boundz_log_rhs(m, alpha, delta)?;
    let samples = wishart_ensemble(m, alpha, trials, seed)?;
    let mut violations = 0;
    for s in &samples {
        // An invalid program has unbounded Z and counts as a violation.
        match z_from_sample(s) {
            Ok(log_z) if log_z < threshold => {}
            _ => violations += 1,
        }
    }
    Ok(TailCheck {
        name: "boundZ".into(),
        threshold,
        bound: delta,
        trials,
        violations,
    })
}

/// One row of the normalization calibration: Edelman estimate versus sampled `ln Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZCalibrationRow {
    pub m: usize,
    pub alpha: f64,
    #[serde(rename = "logZ_formula")]
    pub log_z_formula: f64,
    #[serde(rename = "mean_logZ_sampled")]
    pub mean_log_z_sampled: f64,
    #[serde(rename = "sd_logZ")]
    pub sd_log_z: f64,
}

pub fn z_calibration(m: usize, alpha: f64, samples: usize, seed: u64) -> Result<ZCalibrationRow> {
    let log_z_formula = -z_inverse_expectation(m, alpha)?;
    let draws = wishart_ensemble(m, alpha, samples, seed)?;
    let logs = draws.iter().map(z_from_sample).collect::<Result<Vec<_>>>()?;
    let s = Summary::of(logs);
    Ok(ZCalibrationRow {
        m,
        alpha,
        log_z_formula,
        mean_log_z_sampled: s.mean,
        sd_log_z: s.std_dev(),
    })
}
