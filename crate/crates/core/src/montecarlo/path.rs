use core::fmt;
use core::str::FromStr;

use libm::{exp, log, sqrt};
use rand_distr::{Distribution, StandardNormal};

use super::rng::CounterRng;
use crate::error::{ensure, Error, Result};
use crate::model::{MarketState, ModelParams};

/// Time-stepping scheme for the volatility factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Euler on log-volatility and log-spot.
    EulerLogSpot,
    /// Variance from the closed-form solution of the volatility SDE, driven
    /// by an exponential martingale and its running time integral.
    ClosedVol,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::EulerLogSpot => "euler-logspot",
            Scheme::ClosedVol => "closed-vol",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euler-logspot" => Ok(Scheme::EulerLogSpot),
            "closed-vol" => Ok(Scheme::ClosedVol),
            other => Err(Error::invalid(
                "scheme",
                alloc::format!("unknown scheme `{other}`; expected euler-logspot or closed-vol"),
            )),
        }
    }
}

/// Simulation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    /// Independent samples; with `antithetic` each is a pair of paths.
    pub n_paths: usize,
    pub n_steps: usize,
    pub seed: u64,
    pub scheme: Scheme,
    pub antithetic: bool,
    /// Brownian-bridge correction for crossings between grid points.
    pub bridge: bool,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            n_paths: 1_000_000,
            n_steps: 10_000,
            seed: 20_240_601,
            scheme: Scheme::EulerLogSpot,
            antithetic: false,
            bridge: true,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_paths < 2 {
            return Err(Error::invalid("n_paths", "at least two paths are needed"));
        }
        if self.n_steps == 0 {
            return Err(Error::invalid("n_steps", "at least one step is needed"));
        }
        Ok(())
    }
}

/// One grid point of a simulated path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint {
    pub time: f64,
    pub log_spot: f64,
    pub log_vol: f64,
}

/// Discretised state of a single path.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Stepper {
    pub log_spot: f64,
    /// `e^{2V}` at the current grid point.
    pub variance: f64,
    log_vol: f64,
    growth: f64,
    growth_integral: f64,
}

/// Per-step constants shared by all paths.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StepRule {
    scheme: Scheme,
    dt: f64,
    sqrt_dt: f64,
    r: f64,
    a: f64,
    c: f64,
    rho: f64,
    rho_perp: f64,
    vol_noise: f64,
    initial_variance: f64,
}

impl StepRule {
    pub fn new(p: &ModelParams, scheme: Scheme, dt: f64, v0: f64) -> Self {
        StepRule {
            scheme,
            dt,
            sqrt_dt: sqrt(dt),
            r: p.r,
            a: p.a,
            c: p.c,
            rho: p.rho,
            rho_perp: sqrt((1.0 - p.rho) * (1.0 + p.rho)),
            vol_noise: p.eps * p.theta,
            initial_variance: exp(2.0 * v0),
        }
    }

    pub fn start(&self, log_spot: f64, v0: f64) -> Stepper {
        Stepper { log_spot, variance: self.initial_variance, log_vol: v0, growth: 1.0, growth_integral: 0.0 }
    }

    /// Log-volatility at the current grid point; the closed-volatility
    /// scheme only tracks `e^{2V}`.
    pub fn log_vol(&self, s: &Stepper) -> f64 {
        match self.scheme {
            Scheme::EulerLogSpot => s.log_vol,
            Scheme::ClosedVol => 0.5 * log(s.variance),
        }
    }

    /// Advances one step with standard normals `z1` (spot) and `z_perp`.
    #[inline(always)]
    pub fn advance(&self, s: &mut Stepper, z1: f64, z_perp: f64) {
        let dw1 = self.sqrt_dt * z1;
        let dw2 = self.rho * dw1 + self.rho_perp * self.sqrt_dt * z_perp;
        let var = s.variance;
        s.log_spot += (self.r - 0.5 * var) * self.dt + sqrt(var) * dw1;
        match self.scheme {
            Scheme::EulerLogSpot => {
                s.log_vol += (self.a - 0.5 * self.c * var) * self.dt + self.vol_noise * dw2;
                s.variance = exp(2.0 * s.log_vol);
            }
            Scheme::ClosedVol => {
                let next = s.growth * exp(2.0 * self.a * self.dt + 2.0 * self.vol_noise * dw2);
                s.growth_integral += 0.5 * (s.growth + next) * self.dt;
                s.growth = next;
                let v0 = self.initial_variance;
                s.variance = v0 * s.growth / (1.0 + self.c * v0 * s.growth_integral);
            }
        }
    }
}

#[inline(always)]
pub(crate) fn normal_pair(rng: &mut CounterRng) -> (f64, f64) {
    let z1: f64 = StandardNormal.sample(rng);
    let z2: f64 = StandardNormal.sample(rng);
    (z1, z2)
}

/// Generates discretised `(log S, V)` paths from a market state.
#[derive(Debug, Clone)]
pub struct PathSimulator {
    rule: StepRule,
    t0: f64,
    log_x0: f64,
    v0: f64,
    n_steps: usize,
    seed: u64,
}

impl PathSimulator {
    pub fn new(params: &ModelParams, state: &MarketState, horizon: f64, cfg: &McConfig) -> Result<Self> {
        params.validate()?;
        state.validate()?;
        cfg.validate()?;
        ensure("horizon", horizon, horizon > state.t, "horizon > t")?;
        let dt = (horizon - state.t) / cfg.n_steps as f64;
        Ok(PathSimulator {
            rule: StepRule::new(params, cfg.scheme, dt, state.v),
            t0: state.t,
            log_x0: log(state.x),
            v0: state.v,
            n_steps: cfg.n_steps,
            seed: cfg.seed,
        })
    }

    /// Path `index`; `mirrored` flips the sign of every normal draw.
    pub fn path(&self, index: u64, mirrored: bool) -> PathIter<'_> {
        PathIter {
            sim: self,
            rng: CounterRng::new(self.seed, index),
            state: self.rule.start(self.log_x0, self.v0),
            sign: if mirrored { -1.0 } else { 1.0 },
            step: 0,
        }
    }
}

/// Grid points of one path, starting with the initial state.
#[derive(Debug, Clone)]
pub struct PathIter<'a> {
    sim: &'a PathSimulator,
    rng: CounterRng,
    state: Stepper,
    sign: f64,
    step: usize,
}

impl Iterator for PathIter<'_> {
    type Item = PathPoint;

    fn next(&mut self) -> Option<PathPoint> {
        if self.step > self.sim.n_steps {
            return None;
        }
        if self.step > 0 {
            let (z1, z2) = normal_pair(&mut self.rng);
            self.sim.rule.advance(&mut self.state, self.sign * z1, self.sign * z2);
        }
        let point = PathPoint {
            time: self.sim.t0 + self.step as f64 * self.sim.rule.dt,
            log_spot: self.state.log_spot,
            log_vol: self.sim.rule.log_vol(&self.state),
        };
        self.step += 1;
        Some(point)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.sim.n_steps + 1 - self.step.min(self.sim.n_steps + 1);
        (left, Some(left))
    }
}

impl ExactSizeIterator for PathIter<'_> {}
