use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix_core::ComplexMatrix;

const MAX_SWEEPS: usize = 80;
const ORTHOGONALITY_TOL: f64 = 1e-12;

/// `input = u · diag(sigma) · vᵀ` with `u`, `v` unitary and `sigma` descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvdResult {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.u
            .sandwich_diag(&self.sigma, &self.v.transpose())
            .expect("factor shapes agree by construction")
    }
}

/// Column-major working copy; Jacobi rotations act on whole columns.
struct Columns {
    rows: usize,
    cols: Vec<Vec<Complex64>>,
}

impl Columns {
    fn of(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: (0..m.cols()).map(|j| (0..m.rows()).map(|i| m[(i, j)]).collect()).collect(),
        }
    }

    fn into_matrix(self) -> ComplexMatrix {
        let cols = &self.cols;
        ComplexMatrix::from_fn(self.rows, cols.len(), |i, j| cols[j][i])
    }

    /// `[c_p, c_q] ← [c_p, c_q] · [[c, s], [-s·e, c·e]]` with `e = phase`.
    fn rotate(&mut self, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
        let (lo, hi) = self.cols.split_at_mut(q);
        let (cp, cq) = (&mut lo[p], &mut hi[0]);
        for (a, b) in cp.iter_mut().zip(cq.iter_mut()) {
            let bq = *b * phase;
            let ap = *a;
            *a = ap * c - bq * s;
            *b = ap * s + bq * c;
        }
    }
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// One-sided Jacobi: orthogonalises the columns of `a` by plane rotations
/// accumulated into `v`, so that `a · v` has orthogonal columns.
fn jacobi(a: &mut Columns, mut v: Option<&mut Columns>) -> Result<()> {
    let n = a.cols.len();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm_sqr(&a.cols[p]);
                let beta = norm_sqr(&a.cols[q]);
                let gamma = inner(&a.cols[p], &a.cols[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= ORTHOGONALITY_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                if t == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                a.rotate(p, q, c, s, phase);
                if let Some(v) = v.as_deref_mut() {
                    v.rotate(p, q, c, s, phase);
                }
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(Error::SvdNoConvergence { sweeps: MAX_SWEEPS })
}

/// Singular value decomposition of a square matrix by one-sided Jacobi.
pub fn svd(m: &ComplexMatrix) -> Result<SvdResult> {
    let n = m.require_square()?;
    m.check_finite()?;
    let mut a = Columns::of(m);
    let mut v = Columns::of(&ComplexMatrix::identity(n));
    jacobi(&mut a, Some(&mut v))?;

    let norms: Vec<f64> = a.cols.iter().map(|c| norm_sqr(c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let sigma: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let smax = sigma.first().copied().unwrap_or(0.0);
    // Columns this small carry only rounding noise and cannot be normalised.
    let floor = smax * n as f64 * f64::EPSILON;

    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for (&i, &s) in order.iter().zip(&sigma) {
        if s > floor && s > 0.0 {
            u_cols.push(a.cols[i].iter().map(|z| z / s).collect());
        } else {
            u_cols.push(complete_basis(&u_cols, n));
        }
    }
    let u = Columns { rows: n, cols: u_cols }.into_matrix();
    let v_sorted = Columns {
        rows: n,
        cols: order.iter().map(|&i| v.cols[i].clone()).collect(),
    };
    Ok(SvdResult {
        u,
        sigma,
        v: v_sorted.into_matrix().conj(),
    })
}

/// A unit vector orthogonal to every column in `basis`.
fn complete_basis(basis: &[Vec<Complex64>], n: usize) -> Vec<Complex64> {
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for e in 0..n {
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        w[e] = Complex64::new(1.0, 0.0);
        // Two passes of Gram–Schmidt keep the result orthogonal to working precision.
        for _ in 0..2 {
            for b in basis {
                let proj = inner(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= proj * bi;
                }
            }
        }
        let len = norm_sqr(&w).sqrt();
        if best.as_ref().is_none_or(|(l, _)| len > *l) {
            best = Some((len, w));
        }
        if len > 0.5 {
            break;
        }
    }
    let (len, w) = best.expect("n > 0 whenever a column is requested");
    w.into_iter().map(|z| z / len).collect()
}

/// Singular values (descending) of any `r × c` matrix, without the factors.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    m.check_finite()?;
    let oriented = if m.rows() >= m.cols() { m.clone() } else { m.adjoint() };
    let mut a = Columns::of(&oriented);
    jacobi(&mut a, None)?;
    let mut s: Vec<f64> = a.cols.iter().map(|c| norm_sqr(c).sqrt()).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}
