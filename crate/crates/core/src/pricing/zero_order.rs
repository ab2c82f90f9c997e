use libm::{exp, log, sqrt};

use crate::analytic::norm_cdf;
use crate::error::{ensure, Error, Result};
use crate::model::{gamma2, MarketState, ModelParams, OptionSpec};

/// Constant-volatility down-and-out call in integrated-variance form.
///
/// `log_h` is the barrier seen from `t`, `floor` is `K ∨ H1`, `var` the
/// integrated variance to maturity and `tau` the time to maturity.
#[allow(clippy::too_many_arguments)]
pub(crate) fn closed_form(x: f64, strike: f64, floor: f64, log_h: f64, beta: f64, var: f64, r: f64, tau: f64) -> f64 {
    let g = sqrt(var);
    let disc = exp(-r * tau);
    let d1 = (log(x / floor) + r * tau + 0.5 * var) / g;
    let d2 = d1 - g;
    let lhx = log_h - log(x);
    let d3 = d1 + 2.0 * lhx / g;
    let d4 = d2 + 2.0 * lhx / g;
    x * norm_cdf(d1) - strike * disc * norm_cdf(d2) - exp((2.0 + 2.0 * beta) * lhx) * x * norm_cdf(d3)
        + exp(2.0 * beta * lhx) * strike * disc * norm_cdf(d4)
}

pub(crate) fn check_state(option: &OptionSpec, state: &MarketState) -> Result<()> {
    state.validate()?;
    ensure("t", state.t, (0.0..option.maturity).contains(&state.t), "0 <= t < maturity")
}

/// Zero-order price: the barrier option under the noiseless volatility
/// path with the single-stage barrier `h(t, v)`.
pub fn zero_order_price(params: &ModelParams, option: &OptionSpec, state: &MarketState) -> Result<f64> {
    params.validate()?;
    option.validate()?;
    check_state(option, state)?;
    let c = option.single_stage()?;
    let tau = option.maturity - state.t;
    let var = gamma2(params, state.v, tau);
    let log_h = c.log_barrier(params.r, state.t, var);
    let log_x = log(state.x);
    if log_x < log_h {
        return Err(Error::invalid("x", "spot lies below the barrier h(t, v)"));
    }
    if log_x == log_h {
        return Ok(0.0);
    }
    Ok(closed_form(state.x, c.strike, c.strike_floor(), log_h, c.beta, var, params.r, tau))
}

/// Down-and-out call with constant volatility `sigma` and flat barrier `h`.
pub fn bs_barrier_price(sigma: f64, r: f64, option: &OptionSpec, h: f64, state: &MarketState) -> Result<f64> {
    ensure("sigma", sigma, sigma > 0.0, "sigma > 0")?;
    ensure("r", r, true, "a finite rate")?;
    ensure("h", h, h > 0.0, "h > 0")?;
    ensure("strike", option.strike, option.strike > 0.0, "strike > 0")?;
    check_state(option, state)?;
    ensure("x", state.x, state.x > h, "x > h")?;
    let tau = option.maturity - state.t;
    let var = sigma * sigma * tau;
    let beta = r / (sigma * sigma) - 0.5;
    Ok(closed_form(state.x, option.strike, option.strike.max(h), log(h), beta, var, r, tau))
}
