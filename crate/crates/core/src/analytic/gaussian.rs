//! Expectations of Gaussian-kernel functions of `W ~ Normal(mu, sigma^2)`
//! restricted to `{W > L}`.

use libm::{exp, sqrt};

use super::normal::{bvn_lower, norm_cdf, norm_pdf};
use crate::error::{ensure, Error, Result};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

fn check(nu: f64, kappa: f64, eta: f64, mu: f64, sigma2: f64, lower: f64) -> Result<()> {
    ensure("nu", nu, true, "a finite slope")?;
    ensure("kappa", kappa, true, "a finite intercept")?;
    ensure("eta", eta, true, "a finite exponent")?;
    ensure("mu", mu, true, "a finite mean")?;
    ensure("sigma2", sigma2, sigma2 > 0.0, "sigma2 > 0")?;
    if lower.is_nan() || lower == f64::INFINITY {
        return Err(Error::invalid("lower", "must be a number below +inf"));
    }
    Ok(())
}

/// `E[(nu W + kappa)^ell e^{eta W} n(nu W + kappa) 1{W > L}]` for
/// `ell` in `0..=2`. `lower = -inf` drops the restriction.
pub fn psi(ell: usize, nu: f64, kappa: f64, eta: f64, mu: f64, sigma2: f64, lower: f64) -> Result<f64> {
    if ell > 2 {
        return Err(Error::invalid("ell", alloc::format!("{ell} is not in 0..=2")));
    }
    check(nu, kappa, eta, mu, sigma2, lower)?;
    Ok(psi_all(nu, kappa, eta, mu, sigma2, lower)[ell])
}

/// All three `psi` orders at once, no input checks.
///
/// Tilting `Normal(mu, sigma^2)` by `e^{eta w} n(nu w + kappa)` gives
/// `Normal(m, s^2)` times a constant; with `U = nu Y + kappa` for the
/// tilted `Y` the orders are truncated moments of `U`.
pub(crate) fn psi_all(nu: f64, kappa: f64, eta: f64, mu: f64, sigma2: f64, lower: f64) -> [f64; 3] {
    let den = 1.0 + sigma2 * nu * nu;
    let m = (mu - sigma2 * (nu * kappa - eta)) / den;
    let s = sqrt(sigma2 / den);
    // log of zeta * s / sigma, written without the mu^2 / sigma^2 cancellation
    let shift = kappa + mu * nu;
    let log_scale = -(shift * shift - 2.0 * eta * (mu - kappa * nu * sigma2) - eta * eta * sigma2) / (2.0 * den);
    let scale = FRAC_1_SQRT_2PI * exp(log_scale) / sqrt(den);
    if scale == 0.0 {
        return [0.0; 3];
    }
    let (tail, dens, q) = if lower == f64::NEG_INFINITY {
        (1.0, 0.0, 0.0)
    } else {
        let q = (m - lower) / s;
        (norm_cdf(q), norm_pdf(q), q)
    };
    let centre = nu * m + kappa;
    let spread = nu * s;
    let e0 = tail;
    let e1 = centre * tail + spread * dens;
    let e2 = centre * centre * tail + 2.0 * centre * spread * dens + spread * spread * (tail - q * dens);
    [scale * e0, scale * e1, scale * e2]
}

/// `E[e^{eta W} N(nu W + kappa) 1{W > L}]`. `lower = -inf` drops the
/// restriction.
pub fn upsilon(nu: f64, kappa: f64, eta: f64, mu: f64, sigma2: f64, lower: f64) -> Result<f64> {
    check(nu, kappa, eta, mu, sigma2, lower)?;
    Ok(upsilon_raw(nu, kappa, eta, mu, sigma2, lower))
}

/// `upsilon` without input checks.
///
/// The exponent `q2^2 / (4 q1) - q3` reduces to `eta mu + eta^2 sigma^2 / 2`
/// and the bivariate arguments reduce to the tilted-mean forms below; the
/// reduced forms avoid cancellation when `sigma^2 nu^2` is large or small.
pub(crate) fn upsilon_raw(nu: f64, kappa: f64, eta: f64, mu: f64, sigma2: f64, lower: f64) -> f64 {
    let sigma = sqrt(sigma2);
    let den = 1.0 + sigma2 * nu * nu;
    let tilted = mu + eta * sigma2;
    let weight = exp(eta * mu + 0.5 * eta * eta * sigma2);
    if weight == 0.0 {
        return 0.0;
    }
    let first = (kappa + nu * tilted) / sqrt(den);
    if lower == f64::NEG_INFINITY {
        return weight * norm_cdf(first);
    }
    let second = (tilted - lower) / sigma;
    let corr = sigma * nu / sqrt(den);
    weight * bvn_lower(first, second, corr)
}
