use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

/// Address of a reproducible random sequence.
///
/// Each `(seed, stream_index)` pair selects an independent ChaCha20 stream, so
/// parallel tasks that own distinct indices draw the same numbers no matter
/// how they are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        Self { seed, stream_index }
    }

    /// The stream `offset` positions further along, wrapping on overflow.
    pub fn offset(self, offset: u64) -> Self {
        Self {
            seed: self.seed,
            stream_index: self.stream_index.wrapping_add(offset),
        }
    }

    pub fn generator(&self) -> Gaussians {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        Gaussians { rng, spare: None }
    }
}

/// Uniform and Gaussian variates drawn from one stream.
///
/// Normals come from the Box–Muller transform; the second variate of each
/// pair is cached for the next call.
pub struct Gaussians {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl Gaussians {
    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    fn box_muller(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        (r * c, r * s)
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let (a, b) = self.box_muller();
        self.spare = Some(b);
        a
    }

    /// Complex normal with `E|z - mean|² = variance`, split evenly between
    /// the real and imaginary parts. The mean shifts the real part.
    pub fn complex_normal(&mut self, mean: f64, variance: f64) -> Complex64 {
        let scale = (0.5 * variance).sqrt();
        let (a, b) = self.box_muller();
        Complex64::new(mean + scale * a, scale * b)
    }

    /// Number of failures before the first success, `Pr(n) = (1 - q) qⁿ`.
    pub fn geometric(&mut self, q: f64) -> u64 {
        if q <= 0.0 {
            return 0;
        }
        let u = 1.0 - self.uniform();
        (u.ln() / q.ln()).floor() as u64
    }
}
