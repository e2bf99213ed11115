use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense complex matrix stored row-major.
///
/// Every public constructor checks that the entries are finite; the serialized
/// form is `{rows, cols, re: [...], im: [...]}` with both arrays row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let m = Self { rows, cols, data };
        m.check_finite()?;
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from real row slices; handy in tests and examples.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            data.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::new(r, c, data)
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn real_diagonal(values: &[f64]) -> Self {
        let v: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diagonal(&v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            Some(p) => Err(Error::NonFiniteEntry {
                row: p / self.cols.max(1),
                col: p % self.cols.max(1),
            }),
            None => Ok(()),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self · diag(d) · other` without materialising the diagonal.
    pub fn sandwich_diag(&self, d: &[f64], other: &ComplexMatrix) -> Result<Self> {
        if d.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "diagonal of length {} against {} columns",
                d.len(),
                self.cols
            )));
        }
        let scaled = Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * d[j]);
        scaled.matmul(other)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("shape mismatch in subtraction".into()));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest |a_ij - conj(a_ji)|; zero for Hermitian input.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols.min(self.rows) {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest |a_ij - a_ji|; zero for (complex) symmetric input.
    pub fn symmetric_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..i {
                worst = worst.max((self[(i, j)] - self[(j, i)]).norm());
            }
        }
        worst
    }

    /// Keeps the listed rows and columns, in the given order (repeats allowed).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    /// The bipartite block `[[0, C], [Cᵀ, 0]]`.
    pub fn bipartite_block(&self) -> Self {
        let (r, c) = (self.rows, self.cols);
        Self::from_fn(r + c, r + c, |i, j| {
            if i < r && j >= r {
                self[(i, j - r)]
            } else if i >= r && j < r {
                self[(j, i - r)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRecord {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRecord {
            rows: self.rows,
            cols: self.cols,
            re: self.data.iter().map(|z| z.re).collect(),
            im: self.data.iter().map(|z| z.im).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rec = MatrixRecord::deserialize(deserializer)?;
        if rec.re.len() != rec.im.len() {
            return Err(serde::de::Error::custom("re and im arrays differ in length"));
        }
        let data = rec
            .re
            .iter()
            .zip(&rec.im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(rec.rows, rec.cols, data).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_wrong_length_and_non_finite() {
        assert!(ComplexMatrix::new(2, 2, vec![c(1.0, 0.0); 3]).is_err());
        let err = ComplexMatrix::new(1, 2, vec![c(1.0, 0.0), c(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, Error::NonFiniteEntry { row: 0, col: 1 });
    }

    #[test]
    fn matmul_and_adjoint() {
        let a = ComplexMatrix::new(2, 2, vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0), c(3.0, 0.5)]).unwrap();
        let id = ComplexMatrix::identity(2);
        assert_eq!(a.matmul(&id).unwrap(), a);
        let aa = a.adjoint();
        assert_eq!(aa[(0, 1)], c(0.0, 1.0));
        assert_eq!(aa[(1, 0)], c(2.0, 0.0));
        let h = a.matmul(&aa).unwrap();
        assert!(h.hermitian_defect() < 1e-15);
    }

    #[test]
    fn json_shape() {
        let a = ComplexMatrix::new(1, 2, vec![c(1.0, 2.0), c(3.0, -4.0)]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"rows":1,"cols":2,"re":[1.0,3.0],"im":[2.0,-4.0]}"#);
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<ComplexMatrix>(r#"{"rows":2,"cols":2,"re":[1],"im":[1]}"#).is_err());
    }

    #[test]
    fn bipartite_block_layout() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let b = a.bipartite_block();
        assert_eq!(b.rows(), 4);
        assert_eq!(b[(0, 3)], c(2.0, 0.0));
        assert_eq!(b[(3, 0)], c(2.0, 0.0));
        assert_eq!(b[(2, 1)], c(3.0, 0.0));
        assert_eq!(b[(0, 0)], c(0.0, 0.0));
        assert_eq!(b.symmetric_defect(), 0.0);
    }
}
