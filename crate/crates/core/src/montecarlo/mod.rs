//! Monte Carlo benchmark: Euler discretisations of the full stochastic
//! volatility model with Brownian-bridge barrier monitoring.

mod estimate;
mod path;
mod pricer;
mod rng;

pub use estimate::{pairwise_sum, McEstimate};
pub use path::{McConfig, PathIter, PathPoint, PathSimulator, Scheme};
pub use pricer::{bridge_crossing_prob, DocPricer};
pub use rng::CounterRng;
