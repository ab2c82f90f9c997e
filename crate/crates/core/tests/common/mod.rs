#![allow(dead_code)]

use hyperbarrier_core::model::{BarrierSpec, MarketState, ModelParams, OptionSpec};

pub const STRIKE: f64 = 104.0;
pub const MATURITY: f64 = 1.0;
pub const SPOT: f64 = 100.0;

/// One published benchmark row: inputs and the printed columns.
#[derive(Debug, Clone, Copy)]
pub struct Row {
    pub rho: f64,
    pub h: f64,
    pub e2v: f64,
    pub f0: f64,
    pub total: f64,
    pub f_bs: f64,
    pub benchmark: f64,
    pub benchmark_se: f64,
}

#[allow(clippy::too_many_arguments)]
const fn row(rho: f64, h: f64, e2v: f64, f0: f64, total: f64, f_bs: f64, benchmark: f64, benchmark_se: f64) -> Row {
    Row { rho, h, e2v, f0, total, f_bs, benchmark, benchmark_se }
}

pub const PUBLISHED: [Row; 12] = [
    row(-0.5, 90.0, 0.02, 4.3272, 4.2711, 4.1220, 4.2850, 0.0026),
    row(-0.5, 90.0, 0.04, 5.6098, 5.5456, 5.6098, 5.5611, 0.0037),
    row(-0.5, 90.0, 0.08, 6.6539, 6.5956, 6.9259, 6.5967, 0.0049),
    row(-0.5, 85.0, 0.02, 4.5946, 4.5502, 4.3356, 4.5671, 0.0026),
    row(-0.5, 85.0, 0.04, 6.4010, 6.3391, 6.4010, 6.3506, 0.0038),
    row(-0.5, 85.0, 0.08, 8.1268, 8.0563, 8.6135, 8.0577, 0.0052),
    row(-0.7, 90.0, 0.02, 4.3272, 4.2486, 4.1220, 4.2604, 0.0026),
    row(-0.7, 90.0, 0.04, 5.6098, 5.5199, 5.6098, 5.5378, 0.0036),
    row(-0.7, 90.0, 0.08, 6.6539, 6.5723, 6.9259, 6.5799, 0.0048),
    row(-0.7, 85.0, 0.02, 4.5946, 4.5325, 4.3356, 4.5475, 0.0026),
    row(-0.7, 85.0, 0.04, 6.4010, 6.3142, 6.4010, 6.3309, 0.0037),
    row(-0.7, 85.0, 0.08, 8.1268, 8.0281, 8.6135, 8.0341, 0.0051),
];

pub fn params(rho: f64) -> ModelParams {
    ModelParams::new(0.2, 10.0, 0.1, rho, 0.01)
}

pub fn setup(row: &Row) -> (ModelParams, OptionSpec, MarketState) {
    let p = params(row.rho);
    let state = MarketState::from_variance(0.0, SPOT, row.e2v);
    let barrier = BarrierSpec::fitted(&p, row.h, MATURITY, &state).unwrap();
    (p, OptionSpec::new(STRIKE, MATURITY, barrier), state)
}

/// The single-stage zero-order closed form, continued below the barrier,
/// written out independently of the library for finite-difference oracles.
pub fn f0_formula(p: &ModelParams, option: &OptionSpec, t: f64, x: f64, v: f64) -> f64 {
    use hyperbarrier_core::analytic::norm_cdf;
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
