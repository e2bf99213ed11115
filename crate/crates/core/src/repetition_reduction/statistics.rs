use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use crate::error::{invalid, Error, Result};
use crate::matrix_core::RngStream;
use crate::stats::Summary;

/// `ln E|Per(A_{S,T})|² = ln(n! ∏ sᵢ! ∏ tⱼ!)` for standard Gaussian `A`.
pub fn expected_repeated_permanent(s: &[usize], t: &[usize]) -> Result<f64> {
    let (s_total, t_total) = (s.iter().sum::<usize>(), t.iter().sum::<usize>());
    if s_total != t_total {
        return Err(Error::UnbalancedPattern { s_total, t_total });
    }
    let lf = |v: &[usize]| v.iter().map(|&k| ln_factorial(k as u64)).sum::<f64>();
    Ok(ln_factorial(s_total as u64) + lf(s) + lf(t))
}

/// Empirical size of `ξ` when every collision doubles a separate mode.
///
/// `X` is a product of `k` magnitudes `|g|` of standard complex Gaussians and
/// `|ξ| = 2ᵏ X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiStatistics {
    pub k: usize,
    pub trials: usize,
    /// Fraction of trials with `|ξ| ≥ 1.498ᵏ`.
    pub frac_xi_above: f64,
    /// Fraction of trials with `X ≥ 0.7493ᵏ`.
    pub frac_x_above: f64,
    /// `ln X` across trials.
    pub log_x: Summary,
    /// Single-factor `ln|g|` pooled over all trials and factors.
    pub log_factor: Summary,
}

impl XiStatistics {
    /// `Var[ln X] / k`, which estimates the single-factor variance.
    pub fn var_log_x_per_factor(&self) -> f64 {
        self.log_x.variance / self.k as f64
    }
}

pub fn xi_statistics(k: usize, trials: usize, rng: RngStream) -> Result<XiStatistics> {
    if k == 0 {
        return Err(invalid("k", "need at least one collision"));
    }
    if trials < 2 {
        return Err(invalid("trials", "need at least two trials"));
    }
    let draws: Vec<Vec<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut g = rng.offset(i).generator();
            (0..k).map(|_| g.complex_normal(0.0, 1.0).norm().ln()).collect()
        })
        .collect();
    let log_x: Vec<f64> = draws.iter().map(|d| d.iter().sum()).collect();
    let kf = k as f64;
    let xi_cut = kf * 1.498f64.ln();
    let x_cut = kf * 0.7493f64.ln();
    let ln2k = kf * 2f64.ln();
    let frac = |pred: &dyn Fn(f64) -> bool| log_x.iter().filter(|&&v| pred(v)).count() as f64 / trials as f64;
    Ok(XiStatistics {
        k,
        trials,
        frac_xi_above: frac(&|v| v + ln2k >= xi_cut),
        frac_x_above: frac(&|v| v >= x_cut),
        log_x: Summary::of(log_x.iter().copied()),
        log_factor: Summary::of(draws.iter().flatten().copied()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_second_moments() {
        assert!((expected_repeated_permanent(&[1, 1, 1], &[1, 1, 1]).unwrap() - 6f64.ln()).abs() < 1e-12);
        assert!((expected_repeated_permanent(&[2], &[2]).unwrap() - 8f64.ln()).abs() < 1e-12);
        assert!((expected_repeated_permanent(&[2, 1], &[1, 2]).unwrap() - 24f64.ln()).abs() < 1e-12);
        assert!(expected_repeated_permanent(&[2], &[1]).is_err());
    }

    #[test]
    fn single_factor_moments() {
        let st = xi_statistics(1, 200_000, RngStream::new(3, 0)).unwrap();
        let euler = 0.577_215_664_901_532_9;
        assert!((st.log_factor.mean + euler / 2.0).abs() < 0.01);
        let target = std::f64::consts::PI.powi(2) / 24.0;
        assert!((st.log_factor.variance / target - 1.0).abs() < 0.02);
    }
}
