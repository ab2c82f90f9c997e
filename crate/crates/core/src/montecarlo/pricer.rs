use alloc::vec::Vec;

use libm::{exp, expm1, log, log1p};

use super::path::{normal_pair, McConfig, StepRule, Stepper};
use super::rng::CounterRng;
use crate::error::{ensure, Error, Result};
use crate::model::{log_barrier_raw, MarketState, ModelParams, OptionSpec};

/// Beyond this exponent the bridge crossing probability is below half an
/// ulp of one.
const NEGLIGIBLE_EXPONENT: f64 = 40.0;
/// Paths simulated in lockstep by [`DocPricer::fill_samples`].
const LANES: usize = 4;

/// Probability that a Brownian bridge in log-space from `x0` to `x1` with
/// total variance `var` touches the level `b`. One if either endpoint is at
/// or below `b`.
pub fn bridge_crossing_prob(x0: f64, x1: f64, b: f64, var: f64) -> Result<f64> {
    ensure("var", var, var > 0.0, "var > 0")?;
    if x0.is_nan() || x1.is_nan() || b.is_nan() {
        return Err(Error::invalid("x", "log-levels must not be NaN"));
    }
    Ok(crossing_prob(x0, x1, b, var))
}

#[inline(always)]
fn crossing_prob(x0: f64, x1: f64, b: f64, var: f64) -> f64 {
    if x0 <= b || x1 <= b {
        return 1.0;
    }
    let scaled = 2.0 * (x0 - b) * (x1 - b);
    if scaled > NEGLIGIBLE_EXPONENT * var {
        0.0
    } else {
        exp(-scaled / var)
    }
}

#[derive(Debug, Clone)]
enum Barrier {
    Flat(f64),
    /// Single-stage model barrier: per grid point `log H1 - r(T - u)` and
    /// `c/(2a) expm1(2a(T - u))`.
    Exponential {
        base: Vec<f64>,
        reach: Vec<f64>,
        half_slope: f64,
        inv_c: f64,
    },
    Staged(OptionSpec),
}

/// Per-sample kernel for a down-and-out call: discounted payoff times the
/// bridge survival weight, averaged over the antithetic pair when enabled.
#[derive(Debug, Clone)]
pub struct DocPricer {
    params: ModelParams,
    rule: StepRule,
    barrier: Barrier,
    log_final_barrier: f64,
    strike: f64,
    discount: f64,
    log_x0: f64,
    v0: f64,
    t0: f64,
    dt: f64,
    cfg: McConfig,
}

impl DocPricer {
    /// Flat barrier `h` over `[t, T]`.
    pub fn constant_barrier(
        params: &ModelParams,
        option: &OptionSpec,
        h: f64,
        state: &MarketState,
        cfg: &McConfig,
    ) -> Result<Self> {
        ensure("h", h, h > 0.0, "h > 0")?;
        let log_h = log(h);
        Self::build(params, option, state, cfg, Barrier::Flat(log_h), log_h)
    }

    /// The model barrier `h(u, V_u)` evaluated along each simulated path.
    pub fn model_barrier(
        params: &ModelParams,
        option: &OptionSpec,
        state: &MarketState,
        cfg: &McConfig,
    ) -> Result<Self> {
        option.validate()?;
        let log_h1 = log(option.barrier.h1);
        let barrier = match option.barrier.single_beta() {
            Some(beta) => {
                let dt = (option.maturity - state.t) / cfg.n_steps.max(1) as f64;
                let remaining = |k: usize| (option.maturity - state.t - k as f64 * dt).max(0.0);
                let n = cfg.n_steps + 1;
                Barrier::Exponential {
                    base: (0..n).map(|k| log_h1 - params.r * remaining(k)).collect(),
                    reach: (0..n).map(|k| params.c / (2.0 * params.a) * expm1(2.0 * params.a * remaining(k))).collect(),
                    half_slope: 0.5 * (1.0 + 2.0 * beta),
                    inv_c: 1.0 / params.c,
                }
            }
            None => Barrier::Staged(option.clone()),
        };
        let pricer = Self::build(params, option, state, cfg, barrier, log_h1)?;
        if log(state.x) <= log_barrier_raw(params, option, state.t, state.v) {
            return Err(Error::invalid("x", "spot lies at or below the barrier h(t, v)"));
        }
        Ok(pricer)
    }

    fn build(
        params: &ModelParams,
        option: &OptionSpec,
        state: &MarketState,
        cfg: &McConfig,
        barrier: Barrier,
        log_final_barrier: f64,
    ) -> Result<Self> {
        params.validate()?;
        option.validate()?;
        state.validate()?;
        cfg.validate()?;
        ensure("t", state.t, state.t < option.maturity, "t < maturity")?;
        if let Barrier::Flat(log_h) = barrier {
            if log(state.x) <= log_h {
                return Err(Error::invalid("x", "spot lies at or below the barrier"));
            }
        }
        let tau = option.maturity - state.t;
        let dt = tau / cfg.n_steps as f64;
        Ok(DocPricer {
            params: *params,
            rule: StepRule::new(params, cfg.scheme, dt, state.v),
            barrier,
            log_final_barrier,
            strike: option.strike,
            discount: exp(-params.r * tau),
            log_x0: log(state.x),
            v0: state.v,
            t0: state.t,
            dt,
            cfg: *cfg,
        })
    }

    pub fn config(&self) -> &McConfig {
        &self.cfg
    }

    /// Number of independent samples.
    pub fn n_samples(&self) -> usize {
        self.cfg.n_paths
    }

    #[inline(always)]
    fn log_barrier(&self, k: usize, s: &Stepper) -> f64 {
        match &self.barrier {
            Barrier::Flat(h) => *h,
            Barrier::Exponential { base, reach, half_slope, inv_c } => {
                base[k] + half_slope * log1p(reach[k] * s.variance) * inv_c
            }
            Barrier::Staged(option) => {
                let u = self.t0 + k as f64 * self.dt;
                log_barrier_raw(&self.params, option, u, 0.5 * log(s.variance))
            }
        }
    }

    /// Advances a live path by one step; returns false once it is knocked
    /// out. `weight` carries the bridge survival probability.
    #[inline(always)]
    fn step(&self, k: usize, s: &mut Stepper, weight: &mut f64, z1: f64, z2: f64) -> bool {
        let b = self.log_barrier(k, s);
        let from = s.log_spot;
        if from <= b {
            return false;
        }
        let var = s.variance * self.dt;
        self.rule.advance(s, z1, z2);
        if self.cfg.bridge {
            *weight *= 1.0 - crossing_prob(from, s.log_spot, b, var);
            *weight > 0.0
        } else {
            true
        }
    }

    fn payoff(&self, s: &Stepper, weight: f64) -> f64 {
        if s.log_spot <= self.log_final_barrier {
            return 0.0;
        }
        self.discount * weight * (exp(s.log_spot) - self.strike).max(0.0)
    }

    /// Sample `index`: deterministic in `(seed, index)`.
    pub fn sample(&self, index: u64) -> f64 {
        let mut out = [0.0];
        self.fill_samples(index, &mut out);
        out[0]
    }

    /// Writes samples `first, first + 1, ...` into `out`. Paths are advanced
    /// a few at a time in lockstep so their step recursions overlap; every
    /// value equals [`DocPricer::sample`] of its index.
    pub fn fill_samples(&self, first: u64, out: &mut [f64]) {
        for (c, chunk) in out.chunks_mut(LANES).enumerate() {
            self.fill_lanes(first + (c * LANES) as u64, chunk);
        }
    }

    fn fill_lanes(&self, first: u64, out: &mut [f64]) {
        let n = out.len();
        let mut rngs: [CounterRng; LANES] = core::array::from_fn(|j| CounterRng::new(self.cfg.seed, first + j as u64));
        let mut paths = [self.rule.start(self.log_x0, self.v0); 2 * LANES];
        let mut weights = [1.0f64; 2 * LANES];
        let mut alive = [false; 2 * LANES];
        for j in 0..n {
            alive[2 * j] = true;
            alive[2 * j + 1] = self.cfg.antithetic;
        }
        for k in 0..self.cfg.n_steps {
            let mut any = false;
            for (j, rng) in rngs.iter_mut().enumerate().take(n) {
                let (a, b) = (2 * j, 2 * j + 1);
                if !alive[a] && !alive[b] {
                    continue;
                }
                any = true;
                let (z1, z2) = normal_pair(rng);
                if alive[a] {
                    alive[a] = self.step(k, &mut paths[a], &mut weights[a], z1, z2);
                }
                if alive[b] {
                    alive[b] = self.step(k, &mut paths[b], &mut weights[b], -z1, -z2);
                }
            }
            if !any {
                break;
            }
        }
        for (j, slot) in out.iter_mut().enumerate() {
            let value = |i: usize| if alive[i] { self.payoff(&paths[i], weights[i]) } else { 0.0 };
            *slot = if self.cfg.antithetic { 0.5 * (value(2 * j) + value(2 * j + 1)) } else { value(2 * j) };
        }
    }

    /// All samples in index order.
    pub fn samples(&self) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.cfg.n_paths];
        self.fill_samples(0, &mut out);
        out
    }
}
