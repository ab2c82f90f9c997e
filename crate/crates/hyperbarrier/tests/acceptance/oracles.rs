//! Independent reference computations.

use hyperbarrier_core::analytic::{norm_cdf, norm_pdf};
use hyperbarrier_core::model::{ModelParams, OptionSpec};
use hyperbarrier_core::montecarlo::CounterRng;
use hyperbarrier_core::quadrature::{integrate, QuadratureConfig};
use rand_core::RngCore;

pub fn uniform(rng: &mut CounterRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * ((rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64)
}

/// `E[g(W) 1{W > L}]` for `W ~ Normal(mu, sigma2)` by adaptive quadrature
/// over `mu ± 12 sigma`.
pub fn gaussian_expectation(g: impl Fn(f64) -> f64, mu: f64, sigma2: f64, lower: f64) -> f64 {
    let cfg = QuadratureConfig { rel_tol: 1e-12, abs_tol: 1e-14, max_subdivisions: 2000, ..Default::default() };
    let sd = sigma2.sqrt();
    let lo = lower.max(mu - 12.0 * sd);
    let hi = mu + 12.0 * sd;
    if lo >= hi {
        return 0.0;
    }
    integrate(|w| g(w) * norm_pdf((w - mu) / sd) / sd, lo, hi, &cfg).unwrap().value
}

pub fn vanilla(p: &ModelParams, x: f64, strike: f64, tau: f64, var: f64) -> f64 {
    let g = var.sqrt();
    let d1 = ((x / strike).ln() + p.r * tau + 0.5 * var) / g;
    x * norm_cdf(d1) - strike * (-p.r * tau).exp() * norm_cdf(d1 - g)
}

/// The single-stage zero-order closed form written out directly and
/// continued below the barrier, for finite differences.
pub fn f0_formula(p: &ModelParams, option: &OptionSpec, t: f64, x: f64, v: f64) -> f64 {
    let beta = option.barrier.stages[0].beta;
    let tau = option.maturity - t;
    let q = p.c / (2.0 * p.a) * (2.0 * v).exp() * (2.0 * p.a * tau).exp_m1();
    let var = q.ln_1p() / p.c;
    let g = var.sqrt();
    let h = option.barrier.h1 * (-p.r * tau + 0.5 * (1.0 + 2.0 * beta) * var).exp();
    let k = option.strike;
    let disc = (-p.r * tau).exp();
    let d1 = ((x / k.max(option.barrier.h1)).ln() + p.r * tau + 0.5 * var) / g;
    let d2 = d1 - g;
    let d3 = d1 + 2.0 / g * (h / x).ln();
    let d4 = d2 + 2.0 / g * (h / x).ln();
    x * norm_cdf(d1) - k * disc * norm_cdf(d2) - (h / x).powf(2.0 + 2.0 * beta) * x * norm_cdf(d3)
        + (h / x).powf(2.0 * beta) * k * disc * norm_cdf(d4)
}

/// `d^2 f / dx dv` by fourth-order central differences.
pub fn mixed_fd(f: impl Fn(f64, f64) -> f64, x: f64, v: f64, hx: f64, hv: f64) -> f64 {
    const NODES: [(f64, f64); 4] = [(-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0)];
    let mut total = 0.0;
    for (i, ci) in NODES {
        for (j, cj) in NODES {
            total += ci * cj * f(x + i * hx, v + j * hv);
        }
    }
    total / (hx * hv)
}

pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
