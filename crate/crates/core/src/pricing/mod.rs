//! Zero- and first-order prices of the down-and-out call.

mod first_order;
mod two_stage;
mod zero_order;

pub use crate::quadrature::{Integral, QuadratureConfig};
pub use first_order::first_order_term;
pub use two_stage::{two_stage_first_order, two_stage_zero_order};
pub use zero_order::{bs_barrier_price, zero_order_price};

use libm::exp;

use crate::error::{Error, Result};
use crate::model::{log_barrier_raw, MarketState, ModelParams, OptionSpec};

/// Components of the approximate price `f0 + eps * f1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceBreakdown {
    pub f0: f64,
    /// First-order term per unit `eps`.
    pub f1: f64,
    /// `eps * f1`.
    pub correction: f64,
    pub total: f64,
    /// Constant-volatility barrier price with `sigma = e^v` and barrier `H1`;
    /// zero when the spot is already at or below `H1`.
    pub bs_reference: f64,
    /// Quadrature error estimate of `correction`.
    pub quad_error_estimate: f64,
    /// `beta` of the stage containing `t`.
    pub beta_used: f64,
    /// `h(t, v)`.
    pub barrier_at_eval: f64,
    /// The expansion produced a negative price; it is reported, not clamped.
    pub negative_total: bool,
}

/// Approximate price for single-stage barriers or two-stage barriers.
pub fn approx_price(
    params: &ModelParams,
    option: &OptionSpec,
    state: &MarketState,
    quad: &QuadratureConfig,
) -> Result<PriceBreakdown> {
    let stages = option.barrier.stages.len();
    let (f0, f1) = if option.barrier.single_beta().is_some() {
        (zero_order_price(params, option, state)?, first_order_term(params, option, state, quad)?)
    } else if stages == 2 {
        (two_stage_zero_order(params, option, state)?, two_stage_first_order(params, option, state, quad)?)
    } else {
        return Err(Error::invalid(
            "stages",
            alloc::format!("{stages} stages with distinct betas; at most two are supported"),
        ));
    };
    let correction = params.eps * f1.value;
    let total = f0 + correction;
    let stage = option.barrier.stage_index(state.t);
    Ok(PriceBreakdown {
        f0,
        f1: f1.value,
        correction,
        total,
        bs_reference: if state.x > option.barrier.h1 {
            bs_barrier_price(exp(state.v), params.r, option, option.barrier.h1, state)?
        } else {
            0.0
        },
        quad_error_estimate: params.eps.abs() * f1.error,
        beta_used: option.barrier.stages[stage].beta,
        barrier_at_eval: exp(log_barrier_raw(params, option, state.t, state.v)),
        negative_total: total < 0.0,
    })
}
