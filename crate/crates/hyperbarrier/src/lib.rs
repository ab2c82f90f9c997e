//! Command-line pricer and parallel Monte Carlo harness for down-and-out
//! calls under the 2-hypergeometric stochastic volatility model.
//!
//! The numerical kernels live in [`hyperbarrier_core`]; this crate adds
//! multi-threaded simulation drivers, batch pricing, the run configuration
//! format, CSV reports and the `hyperbarrier` command.

pub mod cli;
pub mod commands;
pub mod config;
mod error;
pub mod mc;
pub mod report;

pub use error::{CliError, Result};
