use libm::{exp, log, sqrt};

use super::first_order::integral_raw;
use super::zero_order::{check_state, closed_form};
use crate::analytic::{norm_pdf, upsilon_raw};
use crate::error::{Error, Result};
use crate::model::{gamma2, log_barrier_raw, logvol_flow, MarketState, ModelParams, OptionSpec, SingleStage};
use crate::quadrature::{integrate, Integral, QuadratureConfig};

/// Standard deviations kept on each side of a Gaussian component.
const WINDOW: f64 = 10.0;
/// Relative step in spot and absolute step in log-volatility for the
/// mixed derivative of the stage-one price.
const SPOT_STEP: f64 = 2e-3;
const VOL_STEP: f64 = 4e-3;

struct TwoStage<'a> {
    option: &'a OptionSpec,
    switch: f64,
    beta1: f64,
    beta2: f64,
}

impl<'a> TwoStage<'a> {
    fn new(params: &ModelParams, option: &'a OptionSpec, state: &MarketState) -> Result<Self> {
        params.validate()?;
        option.validate()?;
        check_state(option, state)?;
        let stages = &option.barrier.stages;
        if stages.len() != 2 {
            return Err(Error::invalid("stages", "exactly two stages are required"));
        }
        if !option.is_regular() {
            return Err(Error::invalid("strike", "the two-stage pricer needs strike >= H1"));
        }
        let log_h = log_barrier_raw(params, option, state.t, state.v);
        if log(state.x) < log_h {
            return Err(Error::invalid("x", "spot lies below the barrier h(t, v)"));
        }
        Ok(TwoStage { option, switch: stages[0].end, beta1: stages[0].beta, beta2: stages[1].beta })
    }

    fn last_stage(&self) -> SingleStage {
        SingleStage {
            strike: self.option.strike,
            maturity: self.option.maturity,
            h1: self.option.barrier.h1,
            beta: self.beta2,
        }
    }

    /// Stage-one closed form at `(t, x, v)` with `t < switch`; the formula
    /// is continued analytically below the barrier.
    fn stage_one_price(&self, p: &ModelParams, t: f64, x: f64, v: f64) -> f64 {
        let o = self.option;
        let t1 = self.switch;
        let var1 = gamma2(p, v, t1 - t);
        let v1 = logvol_flow(p, v, t1 - t);
        let var2 = gamma2(p, v1, o.maturity - t1);
        let g = sqrt(var2);
        let log_h_t = log_barrier_raw(p, o, t, v);
        let log_h_switch = log_barrier_raw(p, o, t1, v1);
        let log_floor = log(o.strike_floor());
        let carry = p.r * (o.maturity - t1);
        let kd = o.strike * exp(-carry);
        let up = 1.0 + 2.0 * self.beta2;
        let reflected = 2.0 * log_h_switch - log_floor;
        let k1 = (-log_floor + carry + 0.5 * var2) / g;
        let k3 = (reflected + carry + 0.5 * var2) / g;
        let a = [1.0, -kd, -exp(2.0 * (1.0 + self.beta2) * log_h_switch), exp(2.0 * self.beta2 * log_h_switch) * kd];
        let eta = [1.0, 0.0, -up, -2.0 * self.beta2];
        let nu = [1.0 / g, 1.0 / g, -1.0 / g, -1.0 / g];
        let kappa = [k1, k1 - g, k3, k3 - g];

        let log_x = log(x);
        let drift = p.r * (t1 - t) - 0.5 * var1;
        let sum =
            |mu: f64| (0..4).map(|j| a[j] * upsilon_raw(nu[j], kappa[j], eta[j], mu, var1, log_h_switch)).sum::<f64>();
        let weight = exp(2.0 * self.beta1 * (log_h_t - log_x));
        exp(-p.r * (t1 - t)) * (sum(log_x + drift) - weight * sum(2.0 * log_h_t - log_x + drift))
    }

    /// `x e^v d^2 f0 / dx dv` on stage one by fourth-order central
    /// differences.
    fn stage_one_generator(&self, p: &ModelParams, t: f64, x: f64, v: f64) -> f64 {
        const NODES: [(f64, f64); 4] = [(-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0)];
        let hx = SPOT_STEP * x;
        let mut total = 0.0;
        for (i, ci) in NODES {
            for (j, cj) in NODES {
                total += ci * cj * self.stage_one_price(p, t, x + i * hx, v + j * VOL_STEP);
            }
        }
        x * exp(v) * total / (hx * VOL_STEP)
    }
}

/// Zero-order price under a two-stage barrier.
pub fn two_stage_zero_order(params: &ModelParams, option: &OptionSpec, state: &MarketState) -> Result<f64> {
    let plan = TwoStage::new(params, option, state)?;
    if state.t >= plan.switch {
        let c = plan.last_stage();
        let tau = option.maturity - state.t;
        let var = gamma2(params, state.v, tau);
        let log_h = c.log_barrier(params.r, state.t, var);
        if log(state.x) == log_h {
            return Ok(0.0);
        }
        return Ok(closed_form(state.x, c.strike, c.strike_floor(), log_h, c.beta, var, params.r, tau));
    }
    if log(state.x) == log_barrier_raw(params, option, state.t, state.v) {
        return Ok(0.0);
    }
    Ok(plan.stage_one_price(params, state.t, state.x, state.v))
}

/// `E[g(log S_u); survival]` under the zero-order law from `(t, x)` over a
/// span of integrated variance `var`, integrating each Gaussian component
/// over its own window.
#[allow(clippy::too_many_arguments)]
fn expect_surviving<F: FnMut(f64) -> f64>(
    mut g: F,
    log_x: f64,
    log_h_t: f64,
    beta: f64,
    drift: f64,
    var: f64,
    lower: f64,
    quad: &QuadratureConfig,
) -> Result<Integral> {
    let sd = sqrt(var);
    let weight = exp(2.0 * beta * (log_h_t - log_x));
    let mut out = Integral { value: 0.0, error: 0.0, evaluations: 0 };
    for (mean, sign) in [(log_x + drift, 1.0), (2.0 * log_h_t - log_x + drift, -weight)] {
        let from = ((lower - mean) / sd).max(-WINDOW);
        if from >= WINDOW {
            continue;
        }
        let part = integrate(|z| g(mean + sd * z) * norm_pdf(z), from, WINDOW, quad)?;
        out.value += sign * part.value;
        out.error += sign.abs() * part.error;
        out.evaluations += part.evaluations;
    }
    Ok(out)
}

fn partial(result: Result<Integral>, failed: &mut bool) -> Integral {
    match result {
        Ok(i) => i,
        Err(Error::NonConvergence { value, error_estimate }) => {
            *failed = true;
            Integral { value, error: error_estimate, evaluations: 0 }
        }
        Err(_) => {
            *failed = true;
            Integral { value: f64::NAN, error: f64::INFINITY, evaluations: 0 }
        }
    }
}

/// First-order correction per unit `eps` under a two-stage barrier.
///
/// Stage two contributes the single-stage correction at the switch time
/// averaged over the surviving law of `S_{T1}`; stage one integrates the
/// generator applied to the stage-one zero-order price over time and the
/// surviving law of `S_u`.
pub fn two_stage_first_order(
    params: &ModelParams,
    option: &OptionSpec,
    state: &MarketState,
    quad: &QuadratureConfig,
) -> Result<Integral> {
    let plan = TwoStage::new(params, option, state)?;
    quad.validate()?;
    let p = params;
    let scale = p.rho * p.theta;
    if scale == 0.0 {
        return Ok(Integral { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let last = plan.last_stage();
    if state.t >= plan.switch {
        let i = integral_raw(p, &last, state.t, state.x, state.v, quad)?;
        return Ok(Integral { value: scale * i.value, error: scale.abs() * i.error, ..i });
    }

    let (t, x, v) = (state.t, state.x, state.v);
    let t1 = plan.switch;
    let log_x = log(x);
    let log_h_t = log_barrier_raw(p, option, t, v);
    let mut failed = false;

    // Stage two, seen from the switch time.
    let v1 = logvol_flow(p, v, t1 - t);
    let var1 = gamma2(p, v, t1 - t);
    let lower1 = log_barrier_raw(p, option, t1, v1);
    let inner = quad.tightened(0.1);
    let mut later_failed = false;
    let later = {
        let f = |w: f64| {
            if w <= lower1 {
                return 0.0;
            }
            partial(integral_raw(p, &last, t1, exp(w), v1, &inner), &mut later_failed).value
        };
        let drift = p.r * (t1 - t) - 0.5 * var1;
        partial(expect_surviving(f, log_x, log_h_t, plan.beta1, drift, var1, lower1, quad), &mut failed)
    };

    // Stage one.
    let space = QuadratureConfig { rel_tol: 1e-7, abs_tol: 1e-10, ..*quad };
    let time = QuadratureConfig { rel_tol: 1e-6, abs_tol: 1e-9, ..*quad };
    let mut inner_error = 0.0;
    let mut evaluations = 0;
    let earlier = {
        let integrand = |u: f64| {
            let dt = u - t;
            let v_u = logvol_flow(p, v, dt);
            let var = gamma2(p, v, dt);
            let lower = log_barrier_raw(p, option, u, v_u);
            let g = |w: f64| plan.stage_one_generator(p, u, exp(w), v_u);
            let drift = p.r * dt - 0.5 * var;
            let e = partial(expect_surviving(g, log_x, log_h_t, plan.beta1, drift, var, lower, &space), &mut failed);
            inner_error += e.error;
            evaluations += e.evaluations;
            exp(-p.r * dt) * e.value
        };
        partial(integrate(integrand, t, t1, &time), &mut failed)
    };

    let value = scale * earlier.value + exp(-p.r * (t1 - t)) * scale * later.value;
    let count = earlier.evaluations.max(1) as f64;
    let error = scale.abs() * (earlier.error + (t1 - t) * inner_error / count + exp(-p.r * (t1 - t)) * later.error);
    if failed || later_failed {
        return Err(Error::NonConvergence { value, error_estimate: error });
    }
    Ok(Integral { value, error, evaluations: evaluations + earlier.evaluations + later.evaluations })
}
