//! Dense complex matrices, Gaussian ensembles, and the permanent, hafnian and
//! SVD kernels the rest of the crate builds on.

mod hafnian;
mod matrix;
mod permanent;
mod rng;
mod svd;

pub use hafnian::{hafnian_naive, HAFNIAN_NAIVE_MAX};
pub use matrix::ComplexMatrix;
pub use permanent::{permanent, permanent_naive, PERMANENT_MAX, PERMANENT_NAIVE_MAX};
pub use rng::{Gaussians, RngStream};
pub use svd::{singular_values, svd, SvdResult};

use crate::error::{invalid, Error, Result};

/// i.i.d. complex Gaussian entries with `E|x - mean|² = variance`.
pub fn sample_gaussian_matrix(
    rows: usize,
    cols: usize,
    mean: f64,
    variance: f64,
    rng: RngStream,
) -> Result<ComplexMatrix> {
    if !(variance > 0.0 && variance.is_finite()) {
        return Err(invalid("variance", format!("must be positive, got {variance}")));
    }
    let mut g = rng.generator();
    Ok(ComplexMatrix::from_fn(rows, cols, |_, _| g.complex_normal(mean, variance)))
}

/// The Fig.-2 style submatrix: row `i` kept `s[i]` times, column `j` kept `t[j]` times.
///
/// Repeats are consecutive and modes stay in ascending order.
pub fn submatrix_repeat(c: &ComplexMatrix, s: &[usize], t: &[usize]) -> Result<ComplexMatrix> {
    if s.len() != c.rows() || t.len() != c.cols() {
        return Err(Error::DimensionMismatch(format!(
            "pattern lengths ({}, {}) against a {}x{} matrix",
            s.len(),
            t.len(),
            c.rows(),
            c.cols()
        )));
    }
    let (s_total, t_total) = (s.iter().sum::<usize>(), t.iter().sum::<usize>());
    if s_total != t_total {
        return Err(Error::UnbalancedPattern { s_total, t_total });
    }
    Ok(c.select(&expand_counts(s), &expand_counts(t)))
}

/// `[2, 0, 1]` becomes `[0, 0, 2]`.
pub(crate) fn expand_counts(counts: &[usize]) -> Vec<usize> {
    counts
        .iter()
        .enumerate()
        .flat_map(|(i, &k)| std::iter::repeat_n(i, k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn numbered(n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |i, j| Complex64::new((10 * (i + 1) + j + 1) as f64, 0.0))
    }

    #[test]
    fn repeat_layout() {
        let c = numbered(3);
        let sub = submatrix_repeat(&c, &[2, 0, 1], &[1, 2, 0]).unwrap();
        let expect = ComplexMatrix::from_real_rows(&[&[11.0, 12.0, 12.0], &[11.0, 12.0, 12.0], &[31.0, 32.0, 32.0]]).unwrap();
        assert_eq!(sub, expect);
        assert_eq!(submatrix_repeat(&c, &[1, 1, 1], &[1, 1, 1]).unwrap(), c);
        let minor = submatrix_repeat(&c, &[1, 1, 0], &[0, 1, 1]).unwrap();
        assert_eq!(minor, ComplexMatrix::from_real_rows(&[&[12.0, 13.0], &[22.0, 23.0]]).unwrap());
        assert_eq!(
            submatrix_repeat(&c, &[1, 0, 0], &[1, 1, 0]),
            Err(Error::UnbalancedPattern { s_total: 1, t_total: 2 })
        );
    }

    #[test]
    fn gaussian_moments() {
        let m = sample_gaussian_matrix(1000, 1000, 0.0, 1.0, RngStream::new(3, 0)).unwrap();
        let n = 1e6;
        let second = m.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>() / n;
        assert!((second - 1.0).abs() < 0.01, "{second}");
        let again = sample_gaussian_matrix(1000, 1000, 0.0, 1.0, RngStream::new(3, 0)).unwrap();
        assert_eq!(m, again);
        assert!(sample_gaussian_matrix(2, 2, 0.0, 0.0, RngStream::new(0, 0)).is_err());
    }

    #[test]
    fn gaussian_ensemble_variance() {
        let (alpha, m) = (3.0f64, 50.0f64);
        let var = 1.0 / (alpha * alpha * m);
        let g = sample_gaussian_matrix(100, 1000, 0.0, var, RngStream::new(9, 1)).unwrap();
        let est = g.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>() / 1e5;
        assert!((est / var - 1.0).abs() < 0.02, "{est} vs {var}");
    }
}
