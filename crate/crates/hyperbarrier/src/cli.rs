//! Argument parsing and dispatch for the `hyperbarrier` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{cmd_dump_config, cmd_mc, cmd_price, cmd_table2};
use crate::config::{BarrierMode, RunConfig, SchemeChoice};
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "hyperbarrier", version, about = "Down-and-out call pricing under the 2-hypergeometric model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First-order approximate price with its components.
    Price(Settings),
    /// Monte Carlo estimate of the full model.
    Mc(Settings),
    /// The benchmark grid of correlations, barriers and variances.
    Table2 {
        #[command(flatten)]
        settings: Settings,
        /// Add Monte Carlo columns.
        #[arg(long)]
        with_mc: bool,
    },
    /// Print the effective configuration as a config file.
    DumpConfig(Settings),
}

/// A config file plus per-key flag overrides.
#[derive(Debug, Clone, Args)]
pub struct Settings {
    /// `key = value` file read before the flags are applied.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub rho: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub strike: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub maturity: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub h: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub switch: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub e2v: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub rel_tol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub abs_tol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub endpoint_inset: Option<f64>,
    #[arg(long)]
    pub max_subdivisions: Option<usize>,
    #[arg(long)]
    pub paths: Option<usize>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// euler-logspot, closed-vol or both.
    #[arg(long)]
    pub scheme: Option<SchemeChoice>,
    #[arg(long)]
    pub antithetic: Option<bool>,
    #[arg(long)]
    pub bridge: Option<bool>,
    /// constant (flat at h) or model (h(u, V_u) along each path).
    #[arg(long)]
    pub barrier: Option<BarrierMode>,
    /// Significant digits in reports.
    #[arg(long)]
    pub precision: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

macro_rules! overwrite {
    ($from:expr, $to:expr; $($field:ident),*) => {
        $(if let Some(v) = $from.$field.clone() { $to.$field = v; })*
    };
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) {
        overwrite!(self, cfg; a, c, theta, eps, rho, r, strike, maturity, h, t, x, e2v,
            rel_tol, abs_tol, endpoint_inset, max_subdivisions, paths, steps, seed,
            scheme, antithetic, bridge, barrier, precision);
        if self.beta.is_some() {
            cfg.beta = self.beta;
        }
        if self.switch.is_some() {
            cfg.switch = self.switch;
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
    }
}

impl Settings {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        self.overrides.apply(&mut cfg);
        Ok(cfg)
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|source| CliError::Io { context: format!("cannot write {}", path.display()), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io { context: "cannot write to standard output".into(), source })
        }
    }
}

pub fn execute(command: &Command) -> Result<()> {
    match command {
        Command::Price(s) => {
            let cfg = s.resolve()?;
            emit(&cfg, &cmd_price(&cfg)?.to_csv())
        }
        Command::Mc(s) => {
            let cfg = s.resolve()?;
            emit(&cfg, &cmd_mc(&cfg)?.to_csv())
        }
        Command::Table2 { settings, with_mc } => {
            let cfg = settings.resolve()?;
            emit(&cfg, &cmd_table2(&cfg, *with_mc)?.to_csv())
        }
        Command::DumpConfig(s) => {
            let cfg = s.resolve()?;
            emit(&cfg, &cmd_dump_config(&cfg)?)
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
