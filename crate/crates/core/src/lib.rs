//! Pricing kernels for down-and-out call (DOC) options under the
//! 2-hypergeometric stochastic volatility model
//!
//! ```text
//! dS = r S dt + e^V S dW1
//! dV = (a - (c/2) e^{2V}) dt + eps * theta dW2,     d<W1, W2> = rho dt
//! ```
//!
//! The price is expanded in the vol-of-vol parameter `eps` around the
//! deterministic-volatility limit, `f = f0 + eps * f1 + O(eps^2)`, for the
//! exponential barrier family `h(t, v)` whose hitting law is known in closed
//! form. The crate is `no_std` (it needs `alloc`) and performs no IO; the
//! `hyperbarrier` crate carries the CLI, file formats and parallel drivers.
//!
//! * [`model`]: parameters, the noiseless log-volatility flow, integrated
//!   variance, barrier functions and the choice of `beta`.
//! * [`analytic`]: Gaussian special functions, the `Psi`/`Upsilon`
//!   expectations, first-order coefficient assembly and the joint law of
//!   the spot and the barrier hitting time.
//! * [`pricing`]: zero- and first-order terms, their two-stage variants and
//!   the constant-volatility reference price.
//! * [`montecarlo`]: path schemes, Brownian-bridge monitoring and per-path
//!   payoff kernels for the full stochastic-volatility model.
#![no_std]

extern crate alloc;

pub mod analytic;
mod error;
pub mod model;
pub mod montecarlo;
pub mod pricing;
pub mod quadrature;

pub use error::{Error, Result};
pub use model::{BarrierSpec, MarketState, ModelParams, OptionSpec, Stage};
pub use pricing::{approx_price, PriceBreakdown, QuadratureConfig};
