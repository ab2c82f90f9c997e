//! The `price`, `mc`, `table2` and `dump-config` commands.

use hyperbarrier_core::model::{MarketState, OptionSpec};
use hyperbarrier_core::montecarlo::McEstimate;
use hyperbarrier_core::{approx_price, PriceBreakdown};

use crate::config::{BarrierMode, RunConfig};
use crate::error::Result;
use crate::mc::{batch_price, mc_doc_price, mc_time_dependent_doc_price};
use crate::report::{format_sig, Report};

/// Correlations, barrier levels and initial variances of the benchmark
/// grid, in report order.
pub const GRID_RHO: [f64; 2] = [-0.5, -0.7];
pub const GRID_H: [f64; 2] = [90.0, 85.0];
pub const GRID_E2V: [f64; 3] = [0.02, 0.04, 0.08];

fn num(cfg: &RunConfig, value: f64) -> String {
    format_sig(value, cfg.precision)
}

fn price_row(cfg: &RunConfig, b: &PriceBreakdown) -> Vec<String> {
    let mut row: Vec<String> = [b.f0, b.f1, b.correction, b.total, b.bs_reference, b.beta_used, b.barrier_at_eval]
        .iter()
        .map(|&v| num(cfg, v))
        .collect();
    row.push(format_sig(b.quad_error_estimate, 3));
    row.push(b.negative_total.to_string());
    row
}

const PRICE_COLUMNS: [&str; 9] =
    ["f0", "f1", "eps_f1", "total", "f_bs", "beta", "barrier", "quad_error", "negative_total"];

pub fn cmd_price(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let b = approx_price(&cfg.model(), &cfg.option()?, &cfg.state(), &cfg.quadrature())?;
    let mut report = Report::new(&PRICE_COLUMNS);
    report.push(price_row(cfg, &b));
    if b.negative_total {
        report.note("negative total: eps is too large for the first-order expansion");
    }
    Ok(report)
}

/// One estimate per scheme in `cfg.scheme`.
pub fn run_mc(cfg: &RunConfig, option: &OptionSpec, state: &MarketState) -> Result<Vec<McEstimate>> {
    let p = cfg.model();
    cfg.scheme
        .schemes()
        .into_iter()
        .map(|scheme| {
            let mc = cfg.mc(scheme);
            Ok(match cfg.barrier {
                BarrierMode::Constant => mc_doc_price(&p, option, cfg.h, state, &mc)?,
                BarrierMode::Model => mc_time_dependent_doc_price(&p, option, state, &mc)?,
            })
        })
        .collect()
}

/// Equal-budget average of per-scheme estimates with its standard error.
pub fn pooled(estimates: &[McEstimate]) -> (f64, f64) {
    let n = estimates.len() as f64;
    let mean = estimates.iter().map(|e| e.mean).sum::<f64>() / n;
    let se = estimates.iter().map(|e| e.std_error * e.std_error).sum::<f64>().sqrt() / n;
    (mean, se)
}

pub fn cmd_mc(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let estimates = run_mc(cfg, &cfg.option()?, &cfg.state())?;
    let mut report = Report::new(&["scheme", "mean", "se", "paths", "steps", "elapsed_s"]);
    for e in &estimates {
        report.push(vec![
            e.scheme.to_string(),
            num(cfg, e.mean),
            num(cfg, e.std_error),
            e.n_paths.to_string(),
            e.n_steps.to_string(),
            format!("{:.3}", e.elapsed_secs),
        ]);
    }
    if let [first, second] = estimates.as_slice() {
        let diff = (first.mean - second.mean).abs();
        let se = first.std_error.hypot(second.std_error);
        let verdict = if diff <= 2.0 * se { "consistent" } else { "INCONSISTENT" };
        report.note(format!(
            "consistency: |diff| = {}, combined se = {}, {verdict} at 2 combined se",
            num(cfg, diff),
            num(cfg, se)
        ));
    }
    Ok(report)
}

/// The benchmark grid priced with every other input taken from `cfg`.
pub fn cmd_table2(cfg: &RunConfig, with_mc: bool) -> Result<Report> {
    cfg.validate()?;
    let mut columns = vec!["rho", "H", "e2v", "f0", "f1", "total", "f_bs"];
    if with_mc {
        columns.extend(["mc_mean", "mc_se", "rel_err"]);
    }
    let mut report = Report::new(&columns);
    let quad = cfg.quadrature();
    for rho in GRID_RHO {
        let rows: Vec<RunConfig> = GRID_H
            .iter()
            .flat_map(|&h| GRID_E2V.iter().map(move |&e2v| (h, e2v)))
            .map(|(h, e2v)| RunConfig { rho, h, e2v, ..cfg.clone() })
            .collect();
        let jobs = rows
            .iter()
            .map(|row| Ok((row.option()?, row.state())))
            .collect::<Result<Vec<(OptionSpec, MarketState)>>>()?;
        let prices = batch_price(&rows[0].model(), &jobs, &quad);
        for ((row, (option, state)), priced) in rows.iter().zip(&jobs).zip(prices) {
            let b = priced?;
            let mut line = vec![row.rho.to_string(), row.h.to_string(), row.e2v.to_string()];
            line.extend([b.f0, b.f1, b.total, b.bs_reference].iter().map(|&v| num(cfg, v)));
            if with_mc {
                let (mean, se) = pooled(&run_mc(row, option, state)?);
                line.extend([mean, se, (b.total - mean) / mean].iter().map(|&v| num(cfg, v)));
            }
            report.push(line);
        }
    }
    Ok(report)
}

pub fn cmd_dump_config(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    Ok(cfg.to_text())
}
