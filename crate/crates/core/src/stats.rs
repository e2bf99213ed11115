//! Small sample-statistics helpers shared by the Monte Carlo drivers.

use serde::{Deserialize, Serialize};

/// Sample mean and unbiased variance, accumulated with Welford's update.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
}

impl Summary {
    pub fn of<I: IntoIterator<Item = f64>>(values: I) -> Self {
        let (mut count, mut mean, mut m2) = (0usize, 0.0f64, 0.0f64);
        for x in values {
            count += 1;
            let delta = x - mean;
            mean += delta / count as f64;
            m2 += delta * (x - mean);
        }
        let variance = if count > 1 { m2 / (count - 1) as f64 } else { 0.0 };
        Self { count, mean, variance }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            return f64::NAN;
        }
        (self.variance / self.count as f64).sqrt()
    }

    /// Distance of the mean from `target` in standard errors.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.mean - target) / self.std_error()
    }
}

/// Ordinary least-squares line `y ≈ slope·x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Neumaier-compensated sum; also returns `Σ|xᵢ|` for cancellation checks.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> (f64, f64) {
    let (mut sum, mut comp, mut abs) = (0.0f64, 0.0f64, 0.0f64);
    for x in values {
        abs += x.abs();
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    (sum + comp, abs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_matches_two_pass() {
        let xs = [1.0, 4.0, 2.0, 8.0, 5.0];
        let s = Summary::of(xs);
        assert_eq!(s.count, 5);
        assert!((s.mean - 4.0).abs() < 1e-15);
        assert!((s.variance - 7.5).abs() < 1e-12);
    }

    #[test]
    fn fit_and_sum() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| 1.5 * v - 2.0).collect();
        let (m, b) = linear_fit(&x, &y);
        assert!((m - 1.5).abs() < 1e-14 && (b + 2.0).abs() < 1e-14);
        let (s, a) = compensated_sum([1e16, 1.0, -1e16]);
        assert_eq!(s, 1.0);
        assert_eq!(a, 2e16 + 1.0);
    }
}
