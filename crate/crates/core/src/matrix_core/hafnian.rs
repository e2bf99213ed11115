use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix_core::ComplexMatrix;

/// Largest `n` (half the dimension) accepted by [`hafnian_naive`].
pub const HAFNIAN_NAIVE_MAX: usize = 7;

/// Hafnian by enumerating the `(2n-1)!!` perfect matchings.
pub fn hafnian_naive(a: &ComplexMatrix) -> Result<Complex64> {
    let dim = a.require_square()?;
    if dim % 2 == 1 {
        return Err(Error::OddDimension(dim));
    }
    if dim / 2 > HAFNIAN_NAIVE_MAX {
        return Err(Error::SizeCap {
            kernel: "hafnian_naive",
            n: dim / 2,
            max: HAFNIAN_NAIVE_MAX,
        });
    }
    let defect = a.symmetric_defect();
    if defect > 1e-12 * a.max_abs().max(1.0) {
        return Err(Error::NotSymmetric(defect));
    }

    fn matchings(a: &ComplexMatrix, free: u32) -> Complex64 {
        if free == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let i = free.trailing_zeros() as usize;
        let rest = free & !(1 << i);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut others = rest;
        while others != 0 {
            let j = others.trailing_zeros() as usize;
            others &= others - 1;
            let w = a[(i, j)];
            if w != Complex64::new(0.0, 0.0) {
                acc += w * matchings(a, rest & !(1 << j));
            }
        }
        acc
    }

    let all = if dim == 0 { 0 } else { (1u32 << dim) - 1 };
    Ok(matchings(a, all))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_values() {
        let c = Complex64::new(0.3, -1.2);
        let m = ComplexMatrix::new(2, 2, vec![Complex64::new(0.0, 0.0), c, c, Complex64::new(0.0, 0.0)]).unwrap();
        assert_eq!(hafnian_naive(&m).unwrap(), c);
        assert_eq!(hafnian_naive(&ComplexMatrix::zeros(4, 4)).unwrap(), Complex64::new(0.0, 0.0));
        // All-ones 6x6 has 5!! = 15 matchings.
        let ones = ComplexMatrix::from_fn(6, 6, |_, _| Complex64::new(1.0, 0.0));
        assert_eq!(hafnian_naive(&ones).unwrap(), Complex64::new(15.0, 0.0));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(hafnian_naive(&ComplexMatrix::zeros(3, 3)), Err(Error::OddDimension(3)));
        let asym = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[2.0, 0.0]]).unwrap();
        assert!(matches!(hafnian_naive(&asym), Err(Error::NotSymmetric(_))));
        assert!(matches!(
            hafnian_naive(&ComplexMatrix::zeros(16, 16)),
            Err(Error::SizeCap { .. })
        ));
    }
}
