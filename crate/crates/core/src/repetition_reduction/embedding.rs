use num_complex::Complex64;
use statrs::function::factorial::factorial;

use crate::error::{invalid, Error, Result};
use crate::matrix_core::{submatrix_repeat, ComplexMatrix, RngStream};

fn check_repetitions(name: &'static str, v: &[usize], c: usize) -> Result<()> {
    if v.len() != c {
        return Err(Error::DimensionMismatch(format!(
            "{name} has length {} for a {c}x{c} matrix",
            v.len()
        )));
    }
    if let Some(i) = v.iter().position(|&x| x == 0) {
        return Err(invalid(name, format!("entry {i} is zero; every mode needs at least one photon")));
    }
    Ok(())
}

fn collisions(v: &[usize]) -> usize {
    v.iter().map(|&x| x - 1).sum()
}

/// `B'`: `a` with a block `V⁽ℓ⁾` appended for every `ℓ` with `s_ℓ > 1`.
///
/// `y[ℓ]` is `c × (s_ℓ - 1)`; row `ℓ` of the block is copied as-is and every
/// other row is multiplied by `z`.
pub fn build_row_extension(a: &ComplexMatrix, s: &[usize], y: &[ComplexMatrix], z: Complex64) -> Result<ComplexMatrix> {
    let c = a.require_square()?;
    check_repetitions("s", s, c)?;
    check_blocks("y", y, s, |k| (c, k))?;
    let k_s = collisions(s);
    let mut out = ComplexMatrix::zeros(c, c + k_s);
    for i in 0..c {
        for j in 0..c {
            out[(i, j)] = a[(i, j)];
        }
    }
    let mut col = c;
    for (l, block) in y.iter().enumerate() {
        for j in 0..block.cols() {
            for i in 0..c {
                out[(i, col)] = if i == l { block[(i, j)] } else { z * block[(i, j)] };
            }
            col += 1;
        }
    }
    Ok(out)
}

fn check_blocks(
    name: &'static str,
    blocks: &[ComplexMatrix],
    reps: &[usize],
    shape: impl Fn(usize) -> (usize, usize),
) -> Result<()> {
    if blocks.len() != reps.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} {name} blocks for {} modes",
            blocks.len(),
            reps.len()
        )));
    }
    for (l, (b, &r)) in blocks.iter().zip(reps).enumerate() {
        let (rows, cols) = shape(r - 1);
        if b.rows() != rows || b.cols() != cols {
            return Err(Error::DimensionMismatch(format!(
                "{name}[{l}] is {}x{}, expected {rows}x{cols}",
                b.rows(),
                b.cols()
            )));
        }
    }
    Ok(())
}

/// The matrix `B[z; x, y]` whose repeated permanent is a degree-`k` polynomial
/// in `z` with constant term `ξ·Per(a)`.
///
/// Rows: `a`'s `c` rows extended by the `y` columns, then `k_t` rows built
/// from `x`. Columns: `a`'s `c` columns, then `k_s` columns built from `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct RepetitionEmbedding {
    a: ComplexMatrix,
    s: Vec<usize>,
    t: Vec<usize>,
    /// `y[ℓ]` is `c × (s_ℓ - 1)`.
    y: Vec<ComplexMatrix>,
    /// `x[ℓ]` is `(t_ℓ - 1) × (c + k_s)`; entry `(j, i)` is `x⁽ℓ⁾ᵢⱼ`.
    x: Vec<ComplexMatrix>,
    k_s: usize,
    k_t: usize,
}

impl RepetitionEmbedding {
    pub fn new(a: ComplexMatrix, s: Vec<usize>, t: Vec<usize>, x: Vec<ComplexMatrix>, y: Vec<ComplexMatrix>) -> Result<Self> {
        let c = a.require_square()?;
        check_repetitions("s", &s, c)?;
        check_repetitions("t", &t, c)?;
        let (k_s, k_t) = (collisions(&s), collisions(&t));
        check_blocks("y", &y, &s, |k| (c, k))?;
        check_blocks("x", &x, &t, |k| (k, c + k_s))?;
        Ok(Self { a, s, t, y, x, k_s, k_t })
    }

    /// Fresh standard complex Gaussian `x` and `y` drawn from `rng`.
    pub fn sample(a: ComplexMatrix, s: Vec<usize>, t: Vec<usize>, rng: RngStream) -> Result<Self> {
        let c = a.require_square()?;
        check_repetitions("s", &s, c)?;
        check_repetitions("t", &t, c)?;
        let k_s = collisions(&s);
        let mut g = rng.generator();
        let y = s
            .iter()
            .map(|&r| ComplexMatrix::from_fn(c, r - 1, |_, _| g.complex_normal(0.0, 1.0)))
            .collect();
        let x = t
            .iter()
            .map(|&r| ComplexMatrix::from_fn(r - 1, c + k_s, |_, _| g.complex_normal(0.0, 1.0)))
            .collect();
        Self::new(a, s, t, x, y)
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn s(&self) -> &[usize] {
        &self.s
    }

    pub fn t(&self) -> &[usize] {
        &self.t
    }

    pub fn c(&self) -> usize {
        self.a.rows()
    }

    pub fn k_s(&self) -> usize {
        self.k_s
    }

    pub fn k_t(&self) -> usize {
        self.k_t
    }

    /// Degree bound `k = k_s + k_t`.
    pub fn k(&self) -> usize {
        self.k_s + self.k_t
    }

    /// Entries of `B` that carry a factor of `z`: `(c-1)k + k_s·k_t`.
    pub fn deformed_entries(&self) -> usize {
        (self.c() - 1) * self.k() + self.k_s * self.k_t
    }

    /// Row pattern `(s, 1 × k_t)`.
    pub fn s_prime(&self) -> Vec<usize> {
        self.s.iter().copied().chain(std::iter::repeat_n(1, self.k_t)).collect()
    }

    /// Column pattern `(t, 1 × k_s)`.
    pub fn t_prime(&self) -> Vec<usize> {
        self.t.iter().copied().chain(std::iter::repeat_n(1, self.k_s)).collect()
    }

    pub fn row_extension(&self, z: Complex64) -> ComplexMatrix {
        build_row_extension(&self.a, &self.s, &self.y, z).expect("validated at construction")
    }

    /// `B[z; x, y]`, of shape `(c + k_t) × (c + k_s)`.
    pub fn b(&self, z: Complex64) -> ComplexMatrix {
        let c = self.c();
        let width = c + self.k_s;
        let top = self.row_extension(z);
        let mut out = ComplexMatrix::zeros(c + self.k_t, width);
        for i in 0..c {
            for j in 0..width {
                out[(i, j)] = top[(i, j)];
            }
        }
        let mut row = c;
        for (l, block) in self.x.iter().enumerate() {
            for j in 0..block.rows() {
                for i in 0..width {
                    out[(row, i)] = if i == l { block[(j, i)] } else { z * block[(j, i)] };
                }
                row += 1;
            }
        }
        out
    }

    /// `B_{S',T'}`, the square matrix handed to the permanent oracle.
    pub fn repeated(&self, z: Complex64) -> ComplexMatrix {
        submatrix_repeat(&self.b(z), &self.s_prime(), &self.t_prime()).expect("patterns balance by construction")
    }

    /// `ξ = ∏ sᵢ! tᵢ! ∏ⱼ x⁽ⁱ⁾ᵢⱼ ∏ⱼ y⁽ⁱ⁾ᵢⱼ`.
    pub fn xi(&self) -> Complex64 {
        let fact: f64 = self
            .s
            .iter()
            .chain(&self.t)
            .map(|&k| factorial(k as u64))
            .product();
        let mut prod = Complex64::new(fact, 0.0);
        for (l, block) in self.y.iter().enumerate() {
            for j in 0..block.cols() {
                prod *= block[(l, j)];
            }
        }
        for (l, block) in self.x.iter().enumerate() {
            for j in 0..block.rows() {
                prod *= block[(j, l)];
            }
        }
        prod
    }

    /// Same embedding with `x`, `y` redrawn from `rng`.
    pub fn resampled(&self, rng: RngStream) -> Self {
        Self::sample(self.a.clone(), self.s.clone(), self.t.clone(), rng).expect("validated at construction")
    }
}

/// Builds the embedding from explicit variable values.
pub fn build_embedding(
    a: &ComplexMatrix,
    s: &[usize],
    t: &[usize],
    x: Vec<ComplexMatrix>,
    y: Vec<ComplexMatrix>,
) -> Result<RepetitionEmbedding> {
    RepetitionEmbedding::new(a.clone(), s.to_vec(), t.to_vec(), x, y)
}
