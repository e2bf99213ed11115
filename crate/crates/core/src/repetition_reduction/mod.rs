//! Permanents with repeated rows and columns.
//!
//! A `c × c` matrix `A` is embedded in a larger matrix `B[z; x, y]` whose
//! repeated-row/column permanent is a polynomial in `z` with constant term
//! `ξ·Per(A)`. Querying that polynomial at roots of unity (amplitudes) or at
//! real points near `z = 1` (squared magnitudes) recovers `Per(A)`.

mod embedding;
mod statistics;

pub use embedding::{build_embedding, build_row_extension, RepetitionEmbedding};
pub use statistics::{expected_repeated_permanent, xi_statistics, XiStatistics};

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matrix_core::{singular_values, ComplexMatrix, RngStream};

/// `|ξ|` below this triggers a redraw of `x`, `y`.
pub const XI_THRESHOLD: f64 = 1e-12;
pub const MAX_XI_RESAMPLES: usize = 64;
pub const CONDITION_LIMIT: f64 = 1e12;

/// `e^{2πij/n}` for `j = 0..n`.
pub fn roots_of_unity(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
        .collect()
}

/// Coefficients `γ₀..γ_{n-1}` of a polynomial of degree `< n` from its values
/// at the `n`-th roots of unity (inverse DFT).
pub fn coefficients_from_roots(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let w = roots_of_unity(n);
    (0..n)
        .map(|p| {
            values
                .iter()
                .enumerate()
                .map(|(j, v)| v * w[(j * p) % n].conj())
                .sum::<Complex64>()
                / n as f64
        })
        .collect()
}

fn evaluate_at_roots<F>(f: F, n: usize) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    roots_of_unity(n).into_par_iter().map(&f).collect()
}

/// Constant term of a degree-`≤ k` polynomial: the mean of its values at the
/// `(k+1)`-th roots of unity. Per-evaluation errors are never amplified.
pub fn interpolate_constant<F>(evaluator: F, k: usize) -> Complex64
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let values = evaluate_at_roots(|z| Ok(evaluator(z)), k + 1).expect("infallible evaluator");
    values.iter().sum::<Complex64>() / (k + 1) as f64
}

/// Outcome of an amplitude recovery.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Recovery {
    pub estimate: Complex64,
    pub xi: Complex64,
    pub oracle_calls: usize,
    pub resamples: usize,
}

fn embedding_with_usable_xi(a: &ComplexMatrix, s: &[usize], t: &[usize], rng: RngStream) -> Result<(RepetitionEmbedding, usize)> {
    for attempt in 0..=MAX_XI_RESAMPLES {
        let e = RepetitionEmbedding::sample(a.clone(), s.to_vec(), t.to_vec(), rng.offset(attempt as u64))?;
        if e.xi().norm() >= XI_THRESHOLD {
            return Ok((e, attempt));
        }
    }
    Err(Error::DegenerateXi {
        threshold: XI_THRESHOLD,
        attempts: MAX_XI_RESAMPLES,
    })
}

/// Estimates `Per(a)` from `k+1` calls to a permanent oracle on repeated
/// matrices `B(ω)_{S',T'}` at the roots of unity.
pub fn recover_permanent<F>(a: &ComplexMatrix, s: &[usize], t: &[usize], oracle: F, rng: RngStream) -> Result<Recovery>
where
    F: Fn(&ComplexMatrix) -> Result<Complex64> + Sync,
{
    let (e, resamples) = embedding_with_usable_xi(a, s, t, rng)?;
    let k = e.k();
    let values = evaluate_at_roots(|z| oracle(&e.repeated(z)), k + 1)?;
    let gamma0 = values.iter().sum::<Complex64>() / (k + 1) as f64;
    let xi = e.xi();
    Ok(Recovery {
        estimate: gamma0 / xi,
        xi,
        oracle_calls: k + 1,
        resamples,
    })
}

/// Outcome of a squared-magnitude recovery, with fit diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Abs2Recovery {
    pub estimate: f64,
    pub xi_abs2: f64,
    pub gamma: f64,
    pub nodes: usize,
    pub condition: f64,
    /// `‖w‖` for the linear map from oracle values to the `z = 0` estimate.
    pub noise_gain: f64,
    pub oracle_calls: usize,
    pub resamples: usize,
}

/// Half-width of the real interval around `z = 1` sampled by the squared-magnitude path.
pub fn abs2_half_width(c: usize, k_s: usize, k_t: usize, delta: f64) -> f64 {
    let k = k_s + k_t;
    let spread = ((c - 1) * k + k_s * k_t) as f64;
    if spread == 0.0 {
        delta
    } else {
        delta / spread.sqrt()
    }
}

/// Estimates `|Per(a)|²` from `2k+1` values of `|Per(B(z)_{S',T'})|²` at real
/// `z` evenly spaced in `[1-γ, 1+γ]`, by a degree-`2k` least-squares fit in
/// `u = z - 1` extrapolated to `z = 0`.
pub fn recover_permanent_abs2<F>(
    a: &ComplexMatrix,
    s: &[usize],
    t: &[usize],
    oracle2: F,
    delta: f64,
    rng: RngStream,
) -> Result<Abs2Recovery>
where
    F: Fn(&ComplexMatrix) -> Result<f64> + Sync,
{
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta", format!("must lie in (0, 1), got {delta}")));
    }
    let (e, resamples) = embedding_with_usable_xi(a, s, t, rng)?;
    let k = e.k();
    let gamma = abs2_half_width(e.c(), e.k_s(), e.k_t(), delta);
    let degree = 2 * k;
    let nodes: Vec<f64> = if degree == 0 {
        vec![0.0]
    } else {
        (0..=degree).map(|j| gamma * (2.0 * j as f64 / degree as f64 - 1.0)).collect()
    };
    let fit = LeastSquares::new(&nodes, degree, gamma)?;
    let values: Vec<f64> = nodes
        .par_iter()
        .map(|&u| oracle2(&e.repeated(Complex64::new(1.0 + u, 0.0))))
        .collect::<Result<_>>()?;
    let at_zero = fit.evaluate_at(&values, -1.0);
    let xi_abs2 = e.xi().norm_sqr();
    Ok(Abs2Recovery {
        estimate: at_zero / xi_abs2,
        xi_abs2,
        gamma,
        nodes: nodes.len(),
        condition: fit.condition,
        noise_gain: fit.noise_gain(-1.0),
        oracle_calls: nodes.len(),
        resamples,
    })
}

/// Polynomial least squares on columns `(u/γ)^p`, solved by normal equations.
struct LeastSquares {
    design: Vec<Vec<f64>>,
    gram: Vec<Vec<f64>>,
    gamma: f64,
    condition: f64,
}

impl LeastSquares {
    fn new(nodes: &[f64], degree: usize, gamma: f64) -> Result<Self> {
        let design: Vec<Vec<f64>> = nodes
            .iter()
            .map(|&u| (0..=degree).map(|p| (u / gamma).powi(p as i32)).collect())
            .collect();
        let as_complex = ComplexMatrix::from_fn(nodes.len(), degree + 1, |i, j| Complex64::new(design[i][j], 0.0));
        let sv = singular_values(&as_complex)?;
        let smin = sv.last().copied().unwrap_or(0.0);
        let condition = if smin > 0.0 { sv[0] / smin } else { f64::INFINITY };
        if condition > CONDITION_LIMIT {
            return Err(Error::IllConditioned {
                condition,
                gamma,
                nodes: nodes.len(),
            });
        }
        let cols = degree + 1;
        let gram = (0..cols)
            .map(|p| (0..cols).map(|q| design.iter().map(|r| r[p] * r[q]).sum()).collect())
            .collect();
        Ok(Self {
            design,
            gram,
            gamma,
            condition,
        })
    }

    /// Monomials `(u/γ)^p` at the target point.
    fn target(&self, u: f64) -> Vec<f64> {
        (0..self.gram.len()).map(|p| (u / self.gamma).powi(p as i32)).collect()
    }

    /// Weights `w` with `estimate(u) = w · values`.
    fn weights(&self, u: f64) -> Vec<f64> {
        let q = solve(self.gram.clone(), self.target(u)).expect("Gram matrix is nonsingular after the condition check");
        self.design
            .iter()
            .map(|row| row.iter().zip(&q).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn evaluate_at(&self, values: &[f64], u: f64) -> f64 {
        self.weights(u).iter().zip(values).map(|(w, v)| w * v).sum()
    }

    fn noise_gain(&self, u: f64) -> f64 {
        self.weights(u).iter().map(|w| w * w).sum::<f64>().sqrt()
    }
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col] == 0.0 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row);
            for (x, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let tail: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - tail) / a[i][i];
    }
    Some(x)
}
