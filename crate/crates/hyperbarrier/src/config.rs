//! Run configuration: flat `key = value` text, one pair per line, `#`
//! comments. Keys match the kebab-case command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hyperbarrier_core::model::{BarrierSpec, MarketState, ModelParams, OptionSpec};
use hyperbarrier_core::montecarlo::{McConfig, Scheme};
use hyperbarrier_core::QuadratureConfig;

use crate::error::{CliError, Result};

/// Which discretisation(s) a Monte Carlo run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeChoice {
    One(Scheme),
    Both,
}

impl SchemeChoice {
    pub fn schemes(self) -> Vec<Scheme> {
        match self {
            SchemeChoice::One(s) => vec![s],
            SchemeChoice::Both => vec![Scheme::EulerLogSpot, Scheme::ClosedVol],
        }
    }
}

impl fmt::Display for SchemeChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeChoice::One(s) => s.fmt(f),
            SchemeChoice::Both => f.write_str("both"),
        }
    }
}

impl FromStr for SchemeChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "both" {
            return Ok(SchemeChoice::Both);
        }
        s.parse::<Scheme>()
            .map(SchemeChoice::One)
            .map_err(|_| format!("unknown scheme `{s}` (euler-logspot, closed-vol or both)"))
    }
}

/// Barrier simulated by the `mc` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BarrierMode {
    /// Flat at `h`.
    Constant,
    /// The exponential barrier `h(u, V_u)` along each path.
    Model,
}

impl fmt::Display for BarrierMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BarrierMode::Constant => "constant",
            BarrierMode::Model => "model",
        })
    }
}

impl FromStr for BarrierMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "constant" => Ok(BarrierMode::Constant),
            "model" => Ok(BarrierMode::Model),
            _ => Err(format!("unknown barrier mode `{s}` (constant or model)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub a: f64,
    pub c: f64,
    pub theta: f64,
    pub eps: f64,
    pub rho: f64,
    pub r: f64,
    pub strike: f64,
    pub maturity: f64,
    /// Barrier level `H1`.
    pub h: f64,
    /// Fixed `beta`; fitted so the barrier passes through `h` at `t` when
    /// absent.
    pub beta: Option<f64>,
    /// Stage boundary of a two-stage barrier.
    pub switch: Option<f64>,
    pub t: f64,
    pub x: f64,
    /// Squared spot volatility `e^{2v}` at `t`.
    pub e2v: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub endpoint_inset: f64,
    pub max_subdivisions: usize,
    pub paths: usize,
    pub steps: usize,
    pub seed: u64,
    pub scheme: SchemeChoice,
    pub antithetic: bool,
    pub bridge: bool,
    pub barrier: BarrierMode,
    /// Significant digits in reports.
    pub precision: usize,
    /// Report destination; standard output when absent.
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let quad = QuadratureConfig::default();
        let mc = McConfig::default();
        RunConfig {
            a: 0.2,
            c: 10.0,
            theta: 1.0,
            eps: 0.1,
            rho: -0.5,
            r: 0.01,
            strike: 104.0,
            maturity: 1.0,
            h: 90.0,
            beta: None,
            switch: None,
            t: 0.0,
            x: 100.0,
            e2v: 0.04,
            rel_tol: quad.rel_tol,
            abs_tol: quad.abs_tol,
            endpoint_inset: quad.endpoint_inset,
            max_subdivisions: quad.max_subdivisions,
            paths: mc.n_paths,
            steps: mc.n_steps,
            seed: mc.seed,
            scheme: SchemeChoice::One(mc.scheme),
            antithetic: mc.antithetic,
            bridge: mc.bridge,
            barrier: BarrierMode::Constant,
            precision: 6,
            out: None,
        }
    }
}

/// Every configuration key, in file order.
pub const KEYS: [&str; 27] = [
    "a",
    "c",
    "theta",
    "eps",
    "rho",
    "r",
    "strike",
    "maturity",
    "h",
    "beta",
    "switch",
    "t",
    "x",
    "e2v",
    "rel-tol",
    "abs-tol",
    "endpoint-inset",
    "max-subdivisions",
    "paths",
    "steps",
    "seed",
    "scheme",
    "antithetic",
    "bridge",
    "barrier",
    "precision",
    "out",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e| CliError::validation(format!("invalid value `{value}` for `{key}`: {e}")))
}

fn parse_optional<T: FromStr>(key: &str, value: &str) -> Result<Option<T>>
where
    T::Err: fmt::Display,
{
    if value.is_empty() {
        Ok(None)
    } else {
        parse(key, value).map(Some)
    }
}

fn show<T: ToString>(value: &Option<T>) -> String {
    value.as_ref().map(T::to_string).unwrap_or_default()
}

impl RunConfig {
    /// Defaults overridden by the pairs in `text`.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        cfg.merge_text(text)?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            context: format!("cannot read config file {}", path.display()),
            source,
        })?;
        Self::from_text(&text)
    }

    pub fn merge_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::validation(format!("line {}: expected `key = value`", n + 1)))?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Sets `key` from its textual value; an empty value clears optional
    /// keys.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "a" => self.a = parse(key, value)?,
            "c" => self.c = parse(key, value)?,
            "theta" => self.theta = parse(key, value)?,
            "eps" => self.eps = parse(key, value)?,
            "rho" => self.rho = parse(key, value)?,
            "r" => self.r = parse(key, value)?,
            "strike" => self.strike = parse(key, value)?,
            "maturity" => self.maturity = parse(key, value)?,
            "h" => self.h = parse(key, value)?,
            "beta" => self.beta = parse_optional(key, value)?,
            "switch" => self.switch = parse_optional(key, value)?,
            "t" => self.t = parse(key, value)?,
            "x" => self.x = parse(key, value)?,
            "e2v" => self.e2v = parse(key, value)?,
            "rel-tol" => self.rel_tol = parse(key, value)?,
            "abs-tol" => self.abs_tol = parse(key, value)?,
            "endpoint-inset" => self.endpoint_inset = parse(key, value)?,
            "max-subdivisions" => self.max_subdivisions = parse(key, value)?,
            "paths" => self.paths = parse(key, value)?,
            "steps" => self.steps = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "scheme" => self.scheme = parse(key, value)?,
            "antithetic" => self.antithetic = parse(key, value)?,
            "bridge" => self.bridge = parse(key, value)?,
            "barrier" => self.barrier = parse(key, value)?,
            "precision" => self.precision = parse(key, value)?,
            "out" => self.out = parse_optional(key, value)?,
            _ => return Err(CliError::validation(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<String> {
        Some(match key {
            "a" => self.a.to_string(),
            "c" => self.c.to_string(),
            "theta" => self.theta.to_string(),
            "eps" => self.eps.to_string(),
            "rho" => self.rho.to_string(),
            "r" => self.r.to_string(),
            "strike" => self.strike.to_string(),
            "maturity" => self.maturity.to_string(),
            "h" => self.h.to_string(),
            "beta" => show(&self.beta),
            "switch" => show(&self.switch),
            "t" => self.t.to_string(),
            "x" => self.x.to_string(),
            "e2v" => self.e2v.to_string(),
            "rel-tol" => self.rel_tol.to_string(),
            "abs-tol" => self.abs_tol.to_string(),
            "endpoint-inset" => self.endpoint_inset.to_string(),
            "max-subdivisions" => self.max_subdivisions.to_string(),
            "paths" => self.paths.to_string(),
            "steps" => self.steps.to_string(),
            "seed" => self.seed.to_string(),
            "scheme" => self.scheme.to_string(),
            "antithetic" => self.antithetic.to_string(),
            "bridge" => self.bridge.to_string(),
            "barrier" => self.barrier.to_string(),
            "precision" => self.precision.to_string(),
            "out" => show(&self.out.as_ref().map(|p| p.display().to_string())),
            _ => return None,
        })
    }

    /// The configuration as `key = value` text that [`RunConfig::from_text`]
    /// reads back unchanged.
    pub fn to_text(&self) -> String {
        KEYS.iter().map(|k| format!("{k} = {}\n", self.get(k).unwrap_or_default())).collect()
    }

    pub fn model(&self) -> ModelParams {
        ModelParams::new(self.a, self.c, self.eps, self.rho, self.r).with_theta(self.theta)
    }

    pub fn state(&self) -> MarketState {
        MarketState::from_variance(self.t, self.x, self.e2v)
    }

    /// The option with its barrier: fixed `beta` when given, otherwise
    /// fitted at the evaluation point; two stages when `switch` is set.
    pub fn option(&self) -> Result<OptionSpec> {
        let p = self.model();
        let state = self.state();
        let barrier = match (self.switch, self.beta) {
            (Some(switch), Some(beta)) => BarrierSpec::multi(
                self.h,
                vec![
                    hyperbarrier_core::Stage { end: switch, beta },
                    hyperbarrier_core::Stage { end: self.maturity, beta },
                ],
            ),
            (Some(switch), None) => BarrierSpec::fitted_multi(&p, self.h, &state, &[switch, self.maturity])?,
            (None, Some(beta)) => BarrierSpec::single(self.h, self.maturity, beta),
            (None, None) => BarrierSpec::fitted(&p, self.h, self.maturity, &state)?,
        };
        let option = OptionSpec::new(self.strike, self.maturity, barrier);
        option.validate()?;
        Ok(option)
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            endpoint_inset: self.endpoint_inset,
            max_subdivisions: self.max_subdivisions,
        }
    }

    pub fn mc(&self, scheme: Scheme) -> McConfig {
        McConfig {
            n_paths: self.paths,
            n_steps: self.steps,
            seed: self.seed,
            scheme,
            antithetic: self.antithetic,
            bridge: self.bridge,
        }
    }

    /// Checks every field against the preconditions of the code it feeds.
    pub fn validate(&self) -> Result<()> {
        self.model().validate()?;
        self.state().validate()?;
        self.option()?;
        self.quadrature().validate()?;
        for scheme in self.scheme.schemes() {
            self.mc(scheme).validate()?;
        }
        if !(1..=17).contains(&self.precision) {
            return Err(CliError::validation(format!("invalid `precision`: {} is outside 1..=17", self.precision)));
        }
        Ok(())
    }
}
