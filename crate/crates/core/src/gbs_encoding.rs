//! Encoding an arbitrary complex matrix as a bipartite GBS program.
//!
//! A transition matrix `C = U diag(tanh rᵢ) Vᵀ` is realised by `m` two-mode
//! squeezers of strength `rᵢ` feeding interferometers `U` and `V`. Outcome
//! probabilities are `|Per(C_{S,T})|² / (∏sᵢ! ∏tⱼ! Z)`.

use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use crate::error::{invalid, Error, Result};
use crate::matrix_core::{permanent, submatrix_repeat, svd, ComplexMatrix, SvdResult, PERMANENT_MAX};

/// Singular values this close to 1 are rejected: `Z` would overflow.
pub const SIGMA_MARGIN: f64 = 1e-12;

const BISECTION_CAP: usize = 200;
const SECTOR_MAX_MODES: usize = 4;
const SECTOR_MAX_PAIRS: usize = 5;

/// A validated program: the matrix, its SVD, squeezing strengths, and `log Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    c: ComplexMatrix,
    svd: SvdResult,
    squeezing: Vec<f64>,
    log_z: f64,
}

impl TransitionMatrix {
    fn from_parts(c: ComplexMatrix, svd: SvdResult) -> Result<Self> {
        if let Some(&bad) = svd.sigma.iter().find(|&&s| s >= 1.0 - SIGMA_MARGIN) {
            return Err(Error::InvalidSingularValue { value: bad });
        }
        let squeezing = svd.sigma.iter().map(|s| s.atanh()).collect();
        let log_z = -svd.sigma.iter().map(|s| (-s * s).ln_1p()).sum::<f64>();
        Ok(Self {
            c,
            svd,
            squeezing,
            log_z,
        })
    }

    pub fn modes(&self) -> usize {
        self.c.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.c
    }

    pub fn svd(&self) -> &SvdResult {
        &self.svd
    }

    pub fn sigma(&self) -> &[f64] {
        &self.svd.sigma
    }

    /// `rᵢ = artanh σᵢ`.
    pub fn squeezing(&self) -> &[f64] {
        &self.squeezing
    }

    pub fn log_z(&self) -> f64 {
        self.log_z
    }

    /// `Z = ∏ 1/(1 - σᵢ²)`; infinite when it overflows, see [`Self::log_z`].
    pub fn z_norm(&self) -> f64 {
        self.log_z.exp()
    }
}

/// Outcome `(S; T)`: photon counts per mode on each half.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhotonPattern {
    pub s: Vec<usize>,
    pub t: Vec<usize>,
}

impl PhotonPattern {
    pub fn new(s: Vec<usize>, t: Vec<usize>) -> Self {
        Self { s, t }
    }

    pub fn vacuum(m: usize) -> Self {
        Self::new(vec![0; m], vec![0; m])
    }

    pub fn is_balanced(&self) -> bool {
        self.s.iter().sum::<usize>() == self.t.iter().sum::<usize>()
    }

    pub fn pairs(&self) -> usize {
        self.s.iter().sum()
    }
}

/// Serialized program: `{matrix, lambda, sigma, r, logZ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgramRecord {
    pub matrix: ComplexMatrix,
    pub lambda: f64,
    pub sigma: Vec<f64>,
    pub r: Vec<f64>,
    #[serde(rename = "logZ")]
    pub log_z: f64,
}

impl ProgramRecord {
    pub fn new(tm: &TransitionMatrix, lambda: f64) -> Self {
        Self {
            matrix: tm.matrix().clone(),
            lambda,
            sigma: tm.sigma().to_vec(),
            r: tm.squeezing().to_vec(),
            log_z: tm.log_z(),
        }
    }

    /// Re-encodes the stored matrix, checking it is still a valid program.
    pub fn program(&self) -> Result<TransitionMatrix> {
        encode(&self.matrix)
    }
}

/// Validates `c` as a program. Never rescales: `σ_max ≥ 1` is an error.
pub fn encode(c: &ComplexMatrix) -> Result<TransitionMatrix> {
    c.require_square()?;
    let decomposition = svd(c)?;
    TransitionMatrix::from_parts(c.clone(), decomposition)
}

/// `Σ σᵢ² / (1 - σᵢ²)`.
pub fn mean_pairs_of_sigma(sigma: &[f64]) -> f64 {
    sigma.iter().map(|s| s * s / (1.0 - s * s)).sum()
}

pub fn mean_photon_pairs(tm: &TransitionMatrix) -> f64 {
    mean_pairs_of_sigma(tm.sigma())
}

/// Finds `λ` with `⟨n⟩(λC) = target` by bisection and returns the scaled program.
pub fn rescale_to_mean_pairs(c: &ComplexMatrix, target: f64) -> Result<(f64, TransitionMatrix)> {
    if !(target > 0.0 && target.is_finite()) {
        return Err(invalid("target", format!("mean pair number must be positive, got {target}")));
    }
    c.require_square()?;
    let base = svd(c)?;
    let smax = base.sigma.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let pairs = |lambda: f64| {
        base.sigma
            .iter()
            .map(|s| {
                let x = lambda * s;
                x * x / (1.0 - x * x)
            })
            .sum::<f64>()
    };
    let (mut lo, mut hi) = (0.0, 1.0 / smax);
    for _ in 0..BISECTION_CAP {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pairs(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Pick whichever endpoint lands closer; both are one ulp apart by now.
    let lambda = if (pairs(lo) - target).abs() <= (pairs(hi) - target).abs() && lo > 0.0 {
        lo
    } else {
        hi
    };
    let scaled = SvdResult {
        u: base.u.clone(),
        sigma: base.sigma.iter().map(|s| s * lambda).collect(),
        v: base.v.clone(),
    };
    let tm = TransitionMatrix::from_parts(c.scale_real(lambda), scaled)?;
    Ok((lambda, tm))
}

fn ln_factorials(counts: &[usize]) -> f64 {
    counts.iter().map(|&k| ln_factorial(k as u64)).sum()
}

/// `ln Pr(S; T)`; `-∞` when the permanent vanishes.
pub fn log_outcome_probability(tm: &TransitionMatrix, p: &PhotonPattern) -> Result<f64> {
    let m = tm.modes();
    if p.s.len() != m || p.t.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "pattern lengths ({}, {}) for {m} modes",
            p.s.len(),
            p.t.len()
        )));
    }
    let (s_total, t_total) = (p.s.iter().sum::<usize>(), p.t.iter().sum::<usize>());
    if s_total != t_total {
        return Err(Error::UnbalancedPattern { s_total, t_total });
    }
    if s_total > PERMANENT_MAX {
        return Err(Error::SizeCap {
            kernel: "permanent",
            n: s_total,
            max: PERMANENT_MAX,
        });
    }
    let sub = submatrix_repeat(tm.matrix(), &p.s, &p.t)?;
    let per = permanent(&sub)?;
    Ok(2.0 * per.norm().ln() - ln_factorials(&p.s) - ln_factorials(&p.t) - tm.log_z())
}

/// `Pr(S; T) = |Per(C_{S,T})|² / (∏sᵢ! ∏tⱼ! Z)`.
pub fn outcome_probability(tm: &TransitionMatrix, p: &PhotonPattern) -> Result<f64> {
    log_outcome_probability(tm, p).map(f64::exp)
}

/// `Pr(n)` for `n = 0..=n_max`: each squeezer emits `Geometric(σᵢ²)` pairs and
/// the total is their convolution.
pub fn pair_number_distribution(tm: &TransitionMatrix, n_max: usize) -> Vec<f64> {
    let mut dist = vec![0.0; n_max + 1];
    dist[0] = 1.0;
    for &s in tm.sigma() {
        let q = s * s;
        let single: Vec<f64> = std::iter::successors(Some(1.0 - q), |p| Some(p * q))
            .take(n_max + 1)
            .collect();
        let mut next = vec![0.0; n_max + 1];
        for (i, &a) in dist.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in single.iter().take(n_max + 1 - i).enumerate() {
                next[i + j] += a * b;
            }
        }
        dist = next;
    }
    dist
}

/// All weak compositions of `n` into `parts` non-negative parts.
pub fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    fn fill(n: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=n).rev() {
            prefix.push(k);
            fill(n - k, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    fill(n, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// Total probability of every outcome with `n` photons per half, by enumeration.
pub fn exact_sector_mass(tm: &TransitionMatrix, n: usize) -> Result<f64> {
    let m = tm.modes();
    if m > SECTOR_MAX_MODES || n > SECTOR_MAX_PAIRS {
        return Err(Error::EnumerationGuard(format!(
            "m = {m}, n = {n} (limits m <= {SECTOR_MAX_MODES}, n <= {SECTOR_MAX_PAIRS})"
        )));
    }
    let halves = compositions(n, m);
    let mut total = 0.0;
    for s in &halves {
        for t in &halves {
            total += outcome_probability(tm, &PhotonPattern::new(s.clone(), t.clone()))?;
        }
    }
    Ok(total)
}
