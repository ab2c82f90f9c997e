//! Gaussian special functions and the probability laws behind the
//! first-order term.

mod coeffs;
mod gaussian;
mod joint_law;
mod normal;

pub use coeffs::{mixed_derivative_coeffs, MixedDerivativeCoeffs};
pub use gaussian::{psi, upsilon};
pub use joint_law::{joint_law_density, survival_above, survival_probability, JointLawParams};
pub use normal::{binorm_cdf, norm_cdf, norm_pdf};

pub(crate) use coeffs::coeffs_raw;
pub(crate) use gaussian::upsilon_raw;
