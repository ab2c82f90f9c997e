use libm::{exp, log};

use super::gaussian::{psi_all, upsilon_raw};
use super::normal::{norm_cdf, norm_pdf};
use crate::error::{ensure, Error, Result};
use crate::model::{sensitivities_raw, ModelParams, OptionSpec, SingleStage};

/// Coefficients expressing `e^W d^2 f0 / dx dv` at `x = e^W` as
///
/// ```text
/// sum_j a_j e^{eta_j W} N(nu_j W + kappa_j)
///     + sum_j sum_l b_{j,l} (nu_j W + kappa_j)^l e^{eta_j W} n(nu_j W + kappa_j)
/// ```
///
/// for the zero-order price at time `u` and log-volatility `v_u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedDerivativeCoeffs {
    pub a: [f64; 3],
    pub b: [[f64; 3]; 3],
    pub eta: [f64; 3],
    pub nu: [f64; 3],
    pub kappa: [f64; 3],
}

/// Coefficients for the single-stage contract at `(u, v_u)`, `u < T`.
pub fn mixed_derivative_coeffs(
    params: &ModelParams,
    option: &OptionSpec,
    u: f64,
    v_u: f64,
) -> Result<MixedDerivativeCoeffs> {
    params.validate()?;
    option.validate()?;
    let contract = option.single_stage()?;
    ensure("u", u, u < option.maturity, "u < maturity")?;
    ensure("v", v_u, true, "a finite log-volatility")?;
    if !option.is_regular() {
        return Err(Error::invalid("strike", "the expansion needs strike >= H1"));
    }
    Ok(coeffs_raw(params, &contract, u, v_u))
}

pub(crate) fn coeffs_raw(p: &ModelParams, c: &SingleStage, u: f64, v_u: f64) -> MixedDerivativeCoeffs {
    let s = sensitivities_raw(p, c, u, v_u);
    let k = c.strike;
    let kh = c.strike_floor();
    let big_a = 1.0 - k / kh;
    let beta = c.beta;
    let tau = c.maturity - u;
    let disc = exp(-p.r * tau);
    let (g, dg) = (s.gamma, s.d_gamma);
    let g2 = g * g;
    let hpow = exp((2.0 + 2.0 * beta) * log(s.barrier));
    let hpow_b = exp(2.0 * beta * log(s.barrier));
    let dlh = s.d_log_barrier;
    let up = 1.0 + 2.0 * beta;
    let log_kh = log(kh);
    let reflected = 2.0 * log(s.barrier) - log_kh;

    let a = [0.0, up * s.d_barrier_pow_2p2b, -2.0 * beta * k * disc * s.d_barrier_pow_2b];
    let b = [
        [dg * (1.0 - big_a / g2), -dg * (1.0 + big_a) / g, dg * big_a / g2],
        [
            -big_a * dg * hpow / g2 + up * hpow * (dg + 2.0 * dlh / g) + big_a / g * s.d_barrier_pow_2p2b,
            -hpow / g * (big_a * (dg + 2.0 * dlh / g) + up * dg),
            hpow * dg * big_a / g2,
        ],
        [2.0 * beta * k * disc * hpow_b * (dg - 2.0 * dlh / g), 2.0 * beta * k * disc * hpow_b * dg / g, 0.0],
    ];
    MixedDerivativeCoeffs {
        a,
        b,
        eta: [1.0, -up, -2.0 * beta],
        nu: [1.0 / g, -1.0 / g, -1.0 / g],
        kappa: [
            (-log_kh + p.r * tau + 0.5 * g2) / g,
            (reflected + p.r * tau + 0.5 * g2) / g,
            (reflected + p.r * tau - 0.5 * g2) / g,
        ],
    }
}

impl MixedDerivativeCoeffs {
    /// `e^W d^2 f0 / dx dv` evaluated at `x = e^W`.
    pub fn scaled_mixed_derivative(&self, log_spot: f64) -> f64 {
        let mut total = 0.0;
        for j in 0..3 {
            let z = self.nu[j] * log_spot + self.kappa[j];
            let growth = exp(self.eta[j] * log_spot);
            let poly = self.b[j][0] + z * (self.b[j][1] + z * self.b[j][2]);
            total += growth * (self.a[j] * norm_cdf(z) + poly * norm_pdf(z));
        }
        total
    }

    /// `E[e^W d^2 f0 / dx dv (e^W) 1{W > L}]` for `W ~ Normal(mu, sigma2)`.
    pub fn expectation(&self, mu: f64, sigma2: f64, lower: f64) -> f64 {
        let mut total = 0.0;
        for j in 0..3 {
            let (nu, kappa, eta) = (self.nu[j], self.kappa[j], self.eta[j]);
            if self.a[j] != 0.0 {
                total += self.a[j] * upsilon_raw(nu, kappa, eta, mu, sigma2, lower);
            }
            let psis = psi_all(nu, kappa, eta, mu, sigma2, lower);
            total += self.b[j].iter().zip(psis).map(|(b, p)| b * p).sum::<f64>();
        }
        total
    }
}
