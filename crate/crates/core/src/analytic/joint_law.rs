use libm::{exp, log, sqrt};

use super::normal::{norm_cdf, norm_pdf};
use crate::error::{ensure, Error, Result};
use crate::model::{gamma2, log_barrier_raw, ModelParams, OptionSpec};

/// Law of `(S_u, no knock-out on [t, u])` when volatility follows the
/// noiseless path from `(t, v)` and the barrier is `h(s, V_s)`.
///
/// `[t, u]` must lie inside one barrier stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointLawParams {
    /// `gamma^2(t, u, v)`.
    pub variance: f64,
    /// Mean of `log S_u` without the barrier.
    pub mean_direct: f64,
    /// Mean of the reflected component.
    pub mean_reflected: f64,
    /// `(h(t) / x)^{2 beta}`.
    pub reflection_weight: f64,
    /// `log h(u, V_u)`.
    pub log_barrier_end: f64,
}

impl JointLawParams {
    pub fn new(params: &ModelParams, option: &OptionSpec, t: f64, u: f64, x: f64, v: f64) -> Result<Self> {
        params.validate()?;
        option.validate()?;
        ensure("t", t, t >= 0.0, "t >= 0")?;
        ensure("u", u, u > t && u <= option.maturity, "t < u <= maturity")?;
        ensure("x", x, x > 0.0, "x > 0")?;
        ensure("v", v, true, "a finite log-volatility")?;
        let stages = &option.barrier.stages;
        let stage = option.barrier.stage_index(t);
        if stages[stage].end < u {
            return Err(Error::invalid("u", "the span [t, u] crosses a stage boundary"));
        }
        let log_h_t = log_barrier_raw(params, option, t, v);
        let log_x = log(x);
        if log_x <= log_h_t {
            return Err(Error::invalid("x", "spot must lie above the barrier at t"));
        }
        let v_u = crate::model::logvol_flow(params, v, u - t);
        Ok(Self::from_parts(
            params.r,
            u - t,
            gamma2(params, v, u - t),
            log_x,
            log_h_t,
            stages[stage].beta,
            log_barrier_raw(params, option, u, v_u),
        ))
    }

    pub(crate) fn from_parts(
        r: f64,
        dt: f64,
        variance: f64,
        log_x: f64,
        log_h_t: f64,
        beta: f64,
        log_h_u: f64,
    ) -> Self {
        let drift = r * dt - 0.5 * variance;
        JointLawParams {
            variance,
            mean_direct: log_x + drift,
            mean_reflected: 2.0 * log_h_t - log_x + drift,
            reflection_weight: exp(2.0 * beta * (log_h_t - log_x)),
            log_barrier_end: log_h_u,
        }
    }

    /// Density of `log S_u` on the survival event.
    pub fn log_density(&self, w: f64) -> f64 {
        if w <= self.log_barrier_end {
            return 0.0;
        }
        let sd = sqrt(self.variance);
        (norm_pdf((w - self.mean_direct) / sd) - self.reflection_weight * norm_pdf((w - self.mean_reflected) / sd)) / sd
    }
}

/// Density of `S_u` at `level` on the survival event.
pub fn joint_law_density(law: &JointLawParams, level: f64) -> f64 {
    if level <= 0.0 {
        return 0.0;
    }
    law.log_density(log(level)) / level
}

/// `P(S_u > level, no knock-out)`, `level >= h(u)`.
pub fn survival_above(law: &JointLawParams, level: f64) -> f64 {
    let w = log(level).max(law.log_barrier_end);
    let sd = sqrt(law.variance);
    norm_cdf(-(w - law.mean_direct) / sd) - law.reflection_weight * norm_cdf(-(w - law.mean_reflected) / sd)
}

/// `P(no knock-out on [t, u])`.
pub fn survival_probability(law: &JointLawParams) -> f64 {
    survival_above(law, exp(law.log_barrier_end))
}
