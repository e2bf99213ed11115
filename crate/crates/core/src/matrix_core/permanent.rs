use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix_core::ComplexMatrix;

pub const PERMANENT_MAX: usize = 30;
pub const PERMANENT_NAIVE_MAX: usize = 9;

// Below this size the Gray walk is cheaper than spinning up rayon tasks.
const PARALLEL_FROM: usize = 16;
// Fixed chunk count, so the summation order never depends on the pool size.
const CHUNKS: u64 = 64;

/// Permanent by Glynn's formula walked in Gray-code order, `O(n·2ⁿ)`.
///
/// Large inputs are split into a fixed number of contiguous Gray-code chunks
/// evaluated in parallel and summed in chunk order, so the result is the same
/// on any number of threads.
pub fn permanent(m: &ComplexMatrix) -> Result<Complex64> {
    let n = m.require_square()?;
    if n > PERMANENT_MAX {
        return Err(Error::SizeCap {
            kernel: "permanent",
            n,
            max: PERMANENT_MAX,
        });
    }
    match n {
        0 => return Ok(Complex64::new(1.0, 0.0)),
        1 => return Ok(m[(0, 0)]),
        2 => return Ok(m[(0, 0)] * m[(1, 1)] + m[(0, 1)] * m[(1, 0)]),
        _ => {}
    }
    let total: u64 = 1 << (n - 1);
    let sum = if n >= PARALLEL_FROM {
        let chunk = total / CHUNKS;
        let parts: Vec<Complex64> = (0..CHUNKS)
            .into_par_iter()
            .map(|c| glynn_range(m, c * chunk, (c + 1) * chunk))
            .collect();
        parts.into_iter().fold(Complex64::new(0.0, 0.0), |a, b| a + b)
    } else {
        glynn_range(m, 0, total)
    };
    Ok(sum / total as f64)
}

/// Sums Glynn terms for Gray-code positions `start..end`.
///
/// Bit `i` of the Gray code flips the sign of row `i + 1`; row 0 is always `+`.
/// Column sums are rebuilt from scratch every `REFRESH` steps so rounding in the
/// incremental updates cannot drift, and terms are accumulated with Neumaier
/// compensation since heavily structured inputs cancel by many orders.
fn glynn_range(m: &ComplexMatrix, start: u64, end: u64) -> Complex64 {
    const REFRESH: u64 = 1024;
    let n = m.rows();
    let mut signs = vec![1.0f64; n];
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    let mut parity = 1.0;
    let reset = |k: u64, signs: &mut [f64], col: &mut [Complex64], parity: &mut f64| {
        let gray = k ^ (k >> 1);
        for (i, s) in signs.iter_mut().enumerate().skip(1) {
            *s = if gray >> (i - 1) & 1 == 1 { -1.0 } else { 1.0 };
        }
        for (j, c) in col.iter_mut().enumerate() {
            *c = (0..n).map(|i| m[(i, j)] * signs[i]).sum();
        }
        *parity = if gray.count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
    };
    reset(start, &mut signs, &mut col, &mut parity);

    let mut acc = Neumaier::default();
    let mut k = start;
    loop {
        let prod = col.iter().fold(Complex64::new(1.0, 0.0), |p, &v| p * v);
        acc.add(prod * parity);
        k += 1;
        if k >= end {
            break;
        }
        if (k - start).is_multiple_of(REFRESH) {
            reset(k, &mut signs, &mut col, &mut parity);
            continue;
        }
        // Position k differs from k-1 in bit trailing_zeros(k).
        let row = k.trailing_zeros() as usize + 1;
        let flip = -2.0 * signs[row];
        signs[row] = -signs[row];
        parity = -parity;
        for (v, &a) in col.iter_mut().zip(m.row(row)) {
            *v += a * flip;
        }
    }
    acc.total()
}

#[derive(Default)]
struct Neumaier {
    re: (f64, f64),
    im: (f64, f64),
}

impl Neumaier {
    fn step((sum, comp): &mut (f64, f64), x: f64) {
        let t = *sum + x;
        *comp += if sum.abs() >= x.abs() { (*sum - t) + x } else { (x - t) + *sum };
        *sum = t;
    }

    fn add(&mut self, z: Complex64) {
        Self::step(&mut self.re, z.re);
        Self::step(&mut self.im, z.im);
    }

    fn total(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// Permanent by direct expansion over all `n!` permutations.
pub fn permanent_naive(m: &ComplexMatrix) -> Result<Complex64> {
    let n = m.require_square()?;
    if n > PERMANENT_NAIVE_MAX {
        return Err(Error::SizeCap {
            kernel: "permanent_naive",
            n,
            max: PERMANENT_NAIVE_MAX,
        });
    }
    fn expand(m: &ComplexMatrix, row: usize, used: u32, prod: Complex64) -> Complex64 {
        let n = m.rows();
        if row == n {
            return prod;
        }
        (0..n)
            .filter(|&j| used & (1 << j) == 0)
            .map(|j| expand(m, row + 1, used | (1 << j), prod * m[(row, j)]))
            .sum()
    }
    Ok(expand(m, 0, 0, Complex64::new(1.0, 0.0)))
}
