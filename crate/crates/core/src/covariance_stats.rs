//! Click statistics of threshold detectors.
//!
//! Exact moments come from the `X`, `Y`, `W` blocks of the Husimi covariance
//! matrix; ensemble predictions come from the quarter-circle law for Gaussian
//! transition matrices at photon density `μ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gbs_encoding::TransitionMatrix;
use crate::matrix_core::ComplexMatrix;

/// `X = U (1-σ²)⁻¹ U†`, `Y = V (1-σ²)⁻¹ V†`, `W = U σ(1-σ²)⁻¹ Vᵀ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HusimiBlocks {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub w: ComplexMatrix,
}

impl HusimiBlocks {
    pub fn modes(&self) -> usize {
        self.x.rows()
    }
}

/// Means, variances and cross-covariance of the click totals `d` and `e` on
/// the two halves.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ClickMoments {
    pub mean_d: f64,
    pub mean_e: f64,
    pub var_d: f64,
    pub var_e: f64,
    pub cov_de: f64,
    pub var_sum: f64,
}

pub fn husimi_blocks(tm: &TransitionMatrix) -> HusimiBlocks {
    let svd = tm.svd();
    let occ: Vec<f64> = svd.sigma.iter().map(|s| 1.0 / (1.0 - s * s)).collect();
    let cross: Vec<f64> = svd.sigma.iter().map(|s| s / (1.0 - s * s)).collect();
    let shapes = "SVD factors are square and conformable";
    HusimiBlocks {
        x: svd.u.sandwich_diag(&occ, &svd.u.adjoint()).expect(shapes),
        y: svd.v.sandwich_diag(&occ, &svd.v.adjoint()).expect(shapes),
        w: svd.u.sandwich_diag(&cross, &svd.v.transpose()).expect(shapes),
    }
}

fn real_diagonal(m: &ComplexMatrix) -> Vec<f64> {
    (0..m.rows()).map(|i| m[(i, i)].re).collect()
}

/// Covariance of vacuum projectors on two modes with diagonal weights `a`, `b`
/// and coupling `|q|²`.
fn pair_term(a: f64, b: f64, q2: f64, i: usize, j: usize) -> Result<f64> {
    let det = a * b - q2;
    if det.is_nan() || det <= 0.0 {
        return Err(Error::UncertaintyViolation { i, j });
    }
    Ok(1.0 / det - 1.0 / (a * b))
}

fn half_moments(block: &ComplexMatrix) -> Result<(f64, f64)> {
    let m = block.rows();
    let diag = real_diagonal(block);
    if let Some(i) = diag.iter().position(|&d| d.is_nan() || d < 1.0 - 1e-12) {
        return Err(Error::UncertaintyViolation { i, j: i });
    }
    let mean = m as f64 - diag.iter().map(|d| 1.0 / d).sum::<f64>();
    let mut var: f64 = diag.iter().map(|d| 1.0 / d - 1.0 / (d * d)).sum();
    for i in 0..m {
        for j in 0..m {
            if i != j {
                var += pair_term(diag[i], diag[j], block[(i, j)].norm_sqr(), i, j)?;
            }
        }
    }
    Ok((mean, var))
}

pub fn click_moments_exact(hb: &HusimiBlocks) -> Result<ClickMoments> {
    let (mean_d, var_d) = half_moments(&hb.x)?;
    let (mean_e, var_e) = half_moments(&hb.y)?;
    let (dx, dy) = (real_diagonal(&hb.x), real_diagonal(&hb.y));
    let mut cov_de = 0.0;
    for (i, &a) in dx.iter().enumerate() {
        for (j, &b) in dy.iter().enumerate() {
            cov_de += pair_term(a, b, hb.w[(i, j)].norm_sqr(), i, j)?;
        }
    }
    Ok(ClickMoments {
        mean_d,
        mean_e,
        var_d,
        var_e,
        cov_de,
        var_sum: var_d + var_e + 2.0 * cov_de,
    })
}

fn check_density(mu: f64) {
    debug_assert!(mu > 0.0 && mu < 1.0, "photon density must lie in (0, 1), got {mu}");
}

/// Ensemble mean click count per half, `mμ/(1+μ)`.
pub fn analytic_click_mean(m: f64, mu: f64) -> f64 {
    check_density(mu);
    m * mu / (1.0 + mu)
}

/// First-order ensemble predictions for the click variances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticVariances {
    pub var_d: f64,
    pub var_sum: f64,
    pub cov_de: f64,
    pub corr: f64,
}

pub fn analytic_click_variances(m: f64, mu: f64) -> AnalyticVariances {
    check_density(mu);
    let shape = 1.0 + mu - mu * mu;
    let var_d = m * mu * shape / ((1.0 - mu) * (1.0 + mu).powi(3));
    AnalyticVariances {
        var_d,
        var_sum: 2.0 * m * (2.0 - mu) * mu / ((1.0 - mu) * (1.0 + mu).powi(2)),
        cov_de: var_d / shape,
        corr: 1.0 / shape,
    }
}

/// Scale `α` whose quarter-circle law has photon density `μ`.
pub fn alpha_of_mu(mu: f64) -> f64 {
    (1.0 + mu) / mu.sqrt()
}

/// Limiting singular-value density `(α/π)√(4 - α²σ²)` on `[0, 2/α]`.
pub fn quarter_circle_pdf(sigma: f64, alpha: f64) -> f64 {
    let r = 4.0 - alpha * alpha * sigma * sigma;
    if sigma < 0.0 || r <= 0.0 {
        0.0
    } else {
        alpha / PI * r.sqrt()
    }
}

/// `∫ f(σ) p_α(σ) dσ`, via `σ = (2/α) sin θ` which makes the integrand smooth.
pub fn quarter_circle_expectation(alpha: f64, f: impl Fn(f64) -> f64) -> f64 {
    const PANELS: usize = 2048;
    let h = 0.5 * PI / PANELS as f64;
    let g = |theta: f64| {
        let c = theta.cos();
        f(2.0 / alpha * theta.sin()) * 4.0 / PI * c * c
    };
    let interior: f64 = (1..PANELS)
        .map(|k| g(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    h / 3.0 * (g(0.0) + interior + g(0.5 * PI))
}

/// Per-mode `E‖X‖²_F / m` and `E‖W‖²_F / m` at density `μ`: `(1+μ)/(1-μ)` and `μ(1+μ)/(1-μ)`.
pub fn frobenius_expectations(mu: f64) -> (f64, f64) {
    let x = (1.0 + mu) / (1.0 - mu);
    (x, mu * x)
}
