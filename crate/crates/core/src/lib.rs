//! Numerical laboratory for bipartite Gaussian boson sampling.
//!
//! * [`matrix_core`]: complex matrices, permanents, hafnians, SVD, seeded Gaussian ensembles.
//! * [`gbs_encoding`]: turn a matrix into a squeezer/interferometer program and evaluate outcome probabilities.
//! * [`covariance_stats`]: exact and ensemble-averaged threshold-detector click moments.
//! * [`ensemble_mc`]: Monte Carlo over random transition matrices.
//! * [`wishart_bounds`]: Wishart closed forms, the error-conversion ratio `I`, and tail-bound checks.
//! * [`repetition_reduction`]: embedding a permanent into a repeated-row/column permanent polynomial and recovering it.

pub mod covariance_stats;
pub mod ensemble_mc;
pub mod error;
pub mod gbs_encoding;
pub mod matrix_core;
pub mod repetition_reduction;
pub mod stats;
pub mod wishart_bounds;

pub use error::{Error, Result};
pub use matrix_core::{ComplexMatrix, RngStream};
