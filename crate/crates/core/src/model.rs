//! Model parameters, the noiseless log-volatility flow and the barrier
//! family.
//!
//! With `eps = 0` the log-volatility follows the ODE
//! `dV = (a - (c/2) e^{2V}) du`, solved in closed form by
//! [`noiseless_logvol`]. Its integrated squared volatility
//! [`integrated_variance`] plays the role of `sigma^2 (u - t)` in every
//! Black–Scholes style formula of the crate.

use alloc::vec::Vec;

use libm::{exp, expm1, log, log1p, sqrt};

use crate::error::{ensure, Error, Result};

/// Risk-neutral parameters of the 2-hypergeometric model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Mean-reversion drift of the log-volatility, per year.
    pub a: f64,
    /// Volatility drag coefficient.
    pub c: f64,
    /// Base vol-of-vol scale; the effective vol-of-vol is `eps * theta`.
    pub theta: f64,
    /// Expansion parameter.
    pub eps: f64,
    /// Correlation between the spot and volatility Brownian motions.
    pub rho: f64,
    /// Risk-free rate, per year.
    pub r: f64,
}

impl ModelParams {
    /// Parameters with `theta = 1`.
    pub fn new(a: f64, c: f64, eps: f64, rho: f64, r: f64) -> Self {
        ModelParams { a, c, theta: 1.0, eps, rho, r }
    }

    pub fn with_theta(self, theta: f64) -> Self {
        ModelParams { theta, ..self }
    }

    pub fn with_eps(self, eps: f64) -> Self {
        ModelParams { eps, ..self }
    }

    pub fn with_rho(self, rho: f64) -> Self {
        ModelParams { rho, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        ensure("a", self.a, self.a > 0.0, "a > 0")?;
        ensure("c", self.c, self.c > 0.0, "c > 0")?;
        ensure("theta", self.theta, self.theta > 0.0, "theta > 0")?;
        ensure("eps", self.eps, self.eps >= 0.0, "eps >= 0")?;
        ensure("rho", self.rho, self.rho.abs() < 1.0, "|rho| < 1")?;
        ensure("r", self.r, true, "a finite rate")?;
        let long_run = self.invariant_variance();
        ensure("c", long_run, long_run > 0.0, "a finite positive long-run variance 2a/c")
    }

    /// Long-run squared volatility `2a/c`.
    pub fn invariant_variance(&self) -> f64 {
        2.0 * self.a / self.c
    }

    /// Log-volatility level at which the noiseless drift vanishes.
    pub fn invariant_logvol(&self) -> f64 {
        0.5 * log(self.invariant_variance())
    }

    pub fn vol_of_vol(&self) -> f64 {
        self.eps * self.theta
    }
}

/// Evaluation point: valuation time, spot and log-volatility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketState {
    pub t: f64,
    pub x: f64,
    pub v: f64,
}

impl MarketState {
    pub fn new(t: f64, x: f64, v: f64) -> Self {
        MarketState { t, x, v }
    }

    /// State whose squared volatility `e^{2v}` is `variance`.
    pub fn from_variance(t: f64, x: f64, variance: f64) -> Self {
        MarketState { t, x, v: 0.5 * log(variance) }
    }

    pub fn variance(&self) -> f64 {
        exp(2.0 * self.v)
    }

    pub fn validate(&self) -> Result<()> {
        ensure("t", self.t, true, "a finite time")?;
        ensure("x", self.x, self.x > 0.0, "x > 0")?;
        ensure("v", self.v, true, "a finite log-volatility")
    }
}

/// One stage of a barrier: on `(previous end, end]` the barrier has the
/// exponential form with parameter `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stage {
    pub end: f64,
    pub beta: f64,
}

/// Terminal level `h1` and the ordered stages of the barrier function.
/// A single stage ending at maturity is the plain exponential family.
#[derive(Debug, Clone, PartialEq)]
pub struct BarrierSpec {
    pub h1: f64,
    pub stages: Vec<Stage>,
}

impl BarrierSpec {
    pub fn single(h1: f64, maturity: f64, beta: f64) -> Self {
        BarrierSpec { h1, stages: alloc::vec![Stage { end: maturity, beta }] }
    }

    pub fn multi(h1: f64, stages: Vec<Stage>) -> Self {
        BarrierSpec { h1, stages }
    }

    /// Single-stage barrier with `H1 = h` and `beta` from [`choose_beta`],
    /// so that the barrier passes through `h` at the evaluation point.
    pub fn fitted(params: &ModelParams, h: f64, maturity: f64, state: &MarketState) -> Result<Self> {
        let beta = choose_beta_raw(params, maturity, state.t, state.v)?;
        Ok(BarrierSpec::single(h, maturity, beta))
    }

    /// Multi-stage barrier with `H1 = h` and betas from
    /// [`choose_multistage_betas`].
    pub fn fitted_multi(params: &ModelParams, h: f64, state: &MarketState, breakpoints: &[f64]) -> Result<Self> {
        let betas = multistage_betas_raw(params, state.t, state.v, breakpoints)?;
        Ok(BarrierSpec::multi(h, breakpoints.iter().zip(betas).map(|(&end, beta)| Stage { end, beta }).collect()))
    }

    pub fn validate(&self, maturity: f64) -> Result<()> {
        ensure("h1", self.h1, self.h1 > 0.0, "h1 > 0")?;
        let last = match self.stages.last() {
            Some(s) => s,
            None => return Err(Error::invalid("stages", "at least one stage is required")),
        };
        for s in &self.stages {
            ensure("beta", s.beta, true, "a finite beta")?;
            ensure("breakpoints", s.end, true, "finite breakpoints")?;
        }
        if self.stages.windows(2).any(|w| w[1].end <= w[0].end) {
            return Err(Error::invalid("breakpoints", "stage ends must be strictly increasing"));
        }
        if last.end != maturity {
            return Err(Error::invalid(
                "breakpoints",
                alloc::format!("last breakpoint {} must equal maturity {}", last.end, maturity),
            ));
        }
        Ok(())
    }

    /// The common `beta` when every stage uses the same one.
    pub fn single_beta(&self) -> Option<f64> {
        let first = self.stages.first()?.beta;
        self.stages.iter().all(|s| s.beta == first).then_some(first)
    }

    /// Index of the stage active at time `t` (stages are left-open).
    pub fn stage_index(&self, t: f64) -> usize {
        self.stages.iter().position(|s| t < s.end).unwrap_or(self.stages.len() - 1)
    }
}

/// A down-and-out call: strike, maturity and barrier.
#[derive(Debug, Clone, PartialEq)]
pub struct OptionSpec {
    pub strike: f64,
    pub maturity: f64,
    pub barrier: BarrierSpec,
}

impl OptionSpec {
    pub fn new(strike: f64, maturity: f64, barrier: BarrierSpec) -> Self {
        OptionSpec { strike, maturity, barrier }
    }

    pub fn validate(&self) -> Result<()> {
        ensure("strike", self.strike, self.strike > 0.0, "strike > 0")?;
        ensure("maturity", self.maturity, self.maturity > 0.0, "maturity > 0")?;
        self.barrier.validate(self.maturity)
    }

    /// `K >= H1`: the payoff is continuous and the first-order machinery
    /// applies.
    pub fn is_regular(&self) -> bool {
        self.strike >= self.barrier.h1
    }

    /// `K ∨ H1`.
    pub fn strike_floor(&self) -> f64 {
        self.strike.max(self.barrier.h1)
    }

    /// `A = 1 - K / (K ∨ H1)`; zero for regular options.
    pub fn discontinuity_weight(&self) -> f64 {
        1.0 - self.strike / self.strike_floor()
    }

    pub(crate) fn single_stage(&self) -> Result<SingleStage> {
        let beta = self
            .barrier
            .single_beta()
            .ok_or_else(|| Error::invalid("stages", "stages carry different betas; use the two-stage pricer"))?;
        Ok(SingleStage { strike: self.strike, maturity: self.maturity, h1: self.barrier.h1, beta })
    }
}

/// Flattened single-stage contract used by the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SingleStage {
    pub strike: f64,
    pub maturity: f64,
    pub h1: f64,
    pub beta: f64,
}

impl SingleStage {
    pub fn strike_floor(&self) -> f64 {
        self.strike.max(self.h1)
    }

    /// `log h(t, v)` given `gamma^2(t, T, v)`.
    pub fn log_barrier(&self, r: f64, t: f64, gamma2_to_maturity: f64) -> f64 {
        log(self.h1) - r * (self.maturity - t) + 0.5 * (1.0 + 2.0 * self.beta) * gamma2_to_maturity
    }
}

/// `V_{t+dt}` starting from `v`, no input checks.
pub(crate) fn logvol_flow(p: &ModelParams, v: f64, dt: f64) -> f64 {
    v + p.a * dt - 0.5 * log1p(p.c / (2.0 * p.a) * exp(2.0 * v) * expm1(2.0 * p.a * dt))
}

/// `gamma^2` over a span of length `dt` starting from `v`, no input checks.
pub(crate) fn gamma2(p: &ModelParams, v: f64, dt: f64) -> f64 {
    log1p(p.c / (2.0 * p.a) * exp(2.0 * v) * expm1(2.0 * p.a * dt)) / p.c
}

fn check_span(t: f64, u: f64) -> Result<()> {
    ensure("t", t, true, "a finite time")?;
    ensure("u", u, u >= t, "u >= t")
}

/// Noiseless log-volatility `V_u^{t,v}`.
pub fn noiseless_logvol(params: &ModelParams, t: f64, v: f64, u: f64) -> Result<f64> {
    params.validate()?;
    check_span(t, u)?;
    ensure("v", v, true, "a finite log-volatility")?;
    Ok(logvol_flow(params, v, u - t))
}

/// Integrated variance `gamma^2(t, u, v) = ∫_t^u e^{2 V_s^{t,v}} ds`.
pub fn integrated_variance(params: &ModelParams, t: f64, u: f64, v: f64) -> Result<f64> {
    params.validate()?;
    check_span(t, u)?;
    ensure("v", v, true, "a finite log-volatility")?;
    Ok(gamma2(params, v, u - t))
}

/// `log h(t, v)` for any stage layout, no input checks. For `t` in stage
/// `i` the exponent collects `gamma^2` from `t` to the end of stage `i` and
/// the full `gamma^2` of every later stage along the noiseless path.
pub(crate) fn log_barrier_raw(p: &ModelParams, option: &OptionSpec, t: f64, v: f64) -> f64 {
    let spec = &option.barrier;
    let mut exponent = log(spec.h1) - p.r * (option.maturity - t);
    if spec.stages.len() == 1 {
        let s = spec.stages[0];
        if t < s.end {
            exponent += 0.5 * (1.0 + 2.0 * s.beta) * gamma2(p, v, s.end - t);
        }
        return exponent;
    }
    let mut start = f64::NEG_INFINITY;
    for s in &spec.stages {
        if t < s.end {
            let from = t.max(start);
            let v_from = logvol_flow(p, v, from - t);
            exponent += 0.5 * (1.0 + 2.0 * s.beta) * gamma2(p, v_from, s.end - from);
        }
        start = s.end;
    }
    exponent
}

/// Barrier level `h(t, v)`; equals `H1` at maturity.
pub fn barrier_level(params: &ModelParams, option: &OptionSpec, t: f64, v: f64) -> Result<f64> {
    params.validate()?;
    option.validate()?;
    ensure("t", t, (0.0..=option.maturity).contains(&t), "0 <= t <= maturity")?;
    ensure("v", v, true, "a finite log-volatility")?;
    Ok(exp(log_barrier_raw(params, option, t, v)))
}

/// Derivatives with respect to the log-volatility argument `v` of
/// `gamma(u, T, v)` and of powers of the single-stage barrier `h(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolSensitivities {
    pub gamma: f64,
    pub d_gamma: f64,
    pub barrier: f64,
    pub d_log_barrier: f64,
    /// `d/dv h^{2+2beta}`
    pub d_barrier_pow_2p2b: f64,
    /// `d/dv h^{2beta}`
    pub d_barrier_pow_2b: f64,
}

pub(crate) fn sensitivities_raw(p: &ModelParams, c: &SingleStage, u: f64, v: f64) -> VolSensitivities {
    let q = p.c / (2.0 * p.a) * exp(2.0 * v) * expm1(2.0 * p.a * (c.maturity - u));
    let g2 = log1p(q) / p.c;
    let gamma = sqrt(g2);
    let d_gamma2 = 2.0 / p.c * q / (1.0 + q);
    let d_gamma = d_gamma2 / (2.0 * gamma);
    let barrier = exp(c.log_barrier(p.r, u, g2));
    let d_log_barrier = 0.5 * (1.0 + 2.0 * c.beta) * d_gamma2;
    let pow_2p2b = libm::pow(barrier, 2.0 + 2.0 * c.beta);
    let pow_2b = libm::pow(barrier, 2.0 * c.beta);
    VolSensitivities {
        gamma,
        d_gamma,
        barrier,
        d_log_barrier,
        d_barrier_pow_2p2b: (2.0 + 2.0 * c.beta) * pow_2p2b * d_log_barrier,
        d_barrier_pow_2b: 2.0 * c.beta * pow_2b * d_log_barrier,
    }
}

/// Analytic `v`-derivatives of `gamma(u, T, ·)` and the single-stage
/// barrier at `v_u`.
pub fn vol_sensitivities(params: &ModelParams, option: &OptionSpec, u: f64, v_u: f64) -> Result<VolSensitivities> {
    params.validate()?;
    option.validate()?;
    let contract = option.single_stage()?;
    ensure("u", u, u < option.maturity, "u < maturity")?;
    ensure("v", v_u, true, "a finite log-volatility")?;
    Ok(sensitivities_raw(params, &contract, u, v_u))
}

fn choose_beta_raw(params: &ModelParams, maturity: f64, t: f64, v: f64) -> Result<f64> {
    params.validate()?;
    ensure("t", t, t < maturity, "t < maturity")?;
    ensure("v", v, true, "a finite log-volatility")?;
    Ok(params.r * (maturity - t) / gamma2(params, v, maturity - t) - 0.5)
}

/// Simplest single-stage `beta`: the one for which `h(t', v') = H1`.
pub fn choose_beta(params: &ModelParams, option: &OptionSpec, t_prime: f64, v_prime: f64) -> Result<f64> {
    choose_beta_raw(params, option.maturity, t_prime, v_prime)
}

fn multistage_betas_raw(p: &ModelParams, t: f64, v: f64, breakpoints: &[f64]) -> Result<Vec<f64>> {
    p.validate()?;
    ensure("t", t, true, "a finite time")?;
    ensure("v", v, true, "a finite log-volatility")?;
    if breakpoints.is_empty() {
        return Err(Error::invalid("breakpoints", "at least one breakpoint is required"));
    }
    let mut start = t;
    let mut v_start = v;
    let mut betas = Vec::with_capacity(breakpoints.len());
    for &end in breakpoints {
        ensure("breakpoints", end, end > start, "strictly increasing breakpoints after t")?;
        betas.push(p.r * (end - start) / gamma2(p, v_start, end - start) - 0.5);
        v_start = logvol_flow(p, v_start, end - start);
        start = end;
    }
    Ok(betas)
}

/// Per-stage `beta_i` making each stage's barrier equal `H1` at its left
/// endpoint along the noiseless path from `(t', v')`. The last breakpoint
/// must be the maturity.
pub fn choose_multistage_betas(
    params: &ModelParams,
    option: &OptionSpec,
    t_prime: f64,
    v_prime: f64,
    breakpoints: &[f64],
) -> Result<Vec<f64>> {
    if breakpoints.last() != Some(&option.maturity) {
        return Err(Error::invalid("breakpoints", "last breakpoint must equal maturity"));
    }
    multistage_betas_raw(params, t_prime, v_prime, breakpoints)
}
