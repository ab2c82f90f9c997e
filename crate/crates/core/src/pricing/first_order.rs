use libm::{exp, log};

use super::zero_order::check_state;
use crate::analytic::coeffs_raw;
use crate::error::{Error, Result};
use crate::model::{gamma2, logvol_flow, MarketState, ModelParams, OptionSpec, SingleStage};
use crate::quadrature::{integrate, Integral, QuadratureConfig};

/// First-order correction per unit `eps`:
///
/// ```text
/// f1 = rho theta ∫_t^T e^{-r(u-t)} e^{V_u} E[e^W d^2 f0/dx dv (u, e^W, V_u); survival] du
/// ```
///
/// with `W = log S_u` under the zero-order law. Requires `K >= H1`.
/// The integral stops `endpoint_inset * (T - t)` short of maturity.
pub fn first_order_term(
    params: &ModelParams,
    option: &OptionSpec,
    state: &MarketState,
    quad: &QuadratureConfig,
) -> Result<Integral> {
    params.validate()?;
    option.validate()?;
    quad.validate()?;
    check_state(option, state)?;
    let contract = option.single_stage()?;
    if !option.is_regular() {
        return Err(Error::invalid("strike", "the first-order term needs strike >= H1"));
    }
    let tau = option.maturity - state.t;
    let log_h = contract.log_barrier(params.r, state.t, gamma2(params, state.v, tau));
    if log(state.x) < log_h {
        return Err(Error::invalid("x", "spot lies below the barrier h(t, v)"));
    }
    if params.rho == 0.0 {
        return Ok(Integral { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let scale = params.rho * params.theta;
    let unscaled = integral_raw(params, &contract, state.t, state.x, state.v, quad);
    match unscaled {
        Ok(i) => Ok(Integral { value: scale * i.value, error: scale.abs() * i.error, ..i }),
        Err(Error::NonConvergence { value, error_estimate }) => {
            Err(Error::NonConvergence { value: scale * value, error_estimate: scale.abs() * error_estimate })
        }
        Err(e) => Err(e),
    }
}

/// The time integral without the `rho theta` factor, no input checks.
pub(crate) fn integral_raw(
    p: &ModelParams,
    c: &SingleStage,
    t: f64,
    x: f64,
    v: f64,
    quad: &QuadratureConfig,
) -> Result<Integral> {
    let tau = c.maturity - t;
    let log_x = log(x);
    let log_h_t = c.log_barrier(p.r, t, gamma2(p, v, tau));
    let log_x_reflected = 2.0 * log_h_t - log_x;
    let weight = exp(2.0 * c.beta * (log_h_t - log_x));
    let integrand = |u: f64| {
        let dt = u - t;
        let v_u = logvol_flow(p, v, dt);
        let var = gamma2(p, v, dt);
        let coeffs = coeffs_raw(p, c, u, v_u);
        let lower = c.log_barrier(p.r, u, gamma2(p, v_u, c.maturity - u));
        let drift = p.r * dt - 0.5 * var;
        let direct = coeffs.expectation(log_x + drift, var, lower);
        let reflected = coeffs.expectation(log_x_reflected + drift, var, lower);
        exp(-p.r * dt + v_u) * (direct - weight * reflected)
    };
    integrate(integrand, t, c.maturity - quad.endpoint_inset * tau, quad)
}
