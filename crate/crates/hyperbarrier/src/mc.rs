//! Parallel Monte Carlo drivers.
//!
//! Samples are generated in parallel but collected in path-index order and
//! reduced by pairwise summation, so an estimate depends only on the seed
//! and the configuration, never on the number of threads.

use std::time::Instant;

use hyperbarrier_core::model::{MarketState, ModelParams, OptionSpec};
use hyperbarrier_core::montecarlo::{DocPricer, McConfig, McEstimate};
use hyperbarrier_core::{approx_price, PriceBreakdown, QuadratureConfig, Result};
use rayon::prelude::*;

/// Samples handed to one rayon task.
const CHUNK: usize = 1024;

/// Discounted, bridge-weighted payoffs of every sample in index order.
pub fn sample_payoffs(pricer: &DocPricer) -> Vec<f64> {
    let mut out = vec![0.0; pricer.n_samples()];
    out.par_chunks_mut(CHUNK).enumerate().for_each(|(c, chunk)| pricer.fill_samples((c * CHUNK) as u64, chunk));
    out
}

fn estimate(pricer: &DocPricer) -> Result<McEstimate> {
    let start = Instant::now();
    let samples = sample_payoffs(pricer);
    let cfg = pricer.config();
    McEstimate::from_samples(&samples, cfg.n_steps, cfg.scheme, start.elapsed().as_secs_f64())
}

/// Down-and-out call with the flat barrier `h`.
pub fn mc_doc_price(
    params: &ModelParams,
    option: &OptionSpec,
    h: f64,
    state: &MarketState,
    cfg: &McConfig,
) -> Result<McEstimate> {
    estimate(&DocPricer::constant_barrier(params, option, h, state, cfg)?)
}

/// Down-and-out call with the barrier `h(u, V_u)` of `option` evaluated
/// along each path.
pub fn mc_time_dependent_doc_price(
    params: &ModelParams,
    option: &OptionSpec,
    state: &MarketState,
    cfg: &McConfig,
) -> Result<McEstimate> {
    estimate(&DocPricer::model_barrier(params, option, state, cfg)?)
}

/// Prices independent `(option, state)` pairs in parallel; the output is in
/// input order.
pub fn batch_price(
    params: &ModelParams,
    jobs: &[(OptionSpec, MarketState)],
    quad: &QuadratureConfig,
) -> Vec<Result<PriceBreakdown>> {
    jobs.par_iter().map(|(option, state)| approx_price(params, option, state, quad)).collect()
}
