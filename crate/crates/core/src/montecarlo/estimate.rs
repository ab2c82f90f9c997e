use core::fmt;

use libm::sqrt;

use super::path::Scheme;
use crate::error::{Error, Result};

/// Sum with `O(log n)` error growth; the result depends only on the order
/// of `values`.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 128;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let (left, right) = values.split_at(values.len() / 2);
    pairwise_sum(left) + pairwise_sum(right)
}

/// Sample mean of discounted payoffs with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    /// Independent samples (antithetic pairs count once).
    pub n_paths: usize,
    pub n_steps: usize,
    pub scheme: Scheme,
    pub elapsed_secs: f64,
}

impl McEstimate {
    pub fn from_samples(samples: &[f64], n_steps: usize, scheme: Scheme, elapsed_secs: f64) -> Result<Self> {
        let n = samples.len();
        if n < 2 {
            return Err(Error::invalid("n_paths", "at least two samples are needed"));
        }
        let mean = pairwise_sum(samples) / n as f64;
        let mut sq = alloc::vec::Vec::with_capacity(n);
        sq.extend(samples.iter().map(|s| (s - mean) * (s - mean)));
        let var = pairwise_sum(&sq) / (n - 1) as f64;
        Ok(McEstimate { mean, std_error: sqrt(var / n as f64), n_paths: n, n_steps, scheme, elapsed_secs })
    }
}

impl fmt::Display for McEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6} ± {:.6} ({}, {} paths)", self.mean, self.std_error, self.scheme, self.n_paths)
    }
}
