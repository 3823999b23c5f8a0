//! Exact SOP as a double integral over the shared-component power `t` and
//! the eavesdropper SNR `y`.
//!
//! Given `t` the branches are independent, so the outage probability is
//! `E_t E_{y|t} [ F_B(2^R (1 + y) - 1 | t) ]`. The outer integral carries the
//! `e^{-t}` law of `t`; the inner one is taken over `u = y / (gE (1 - l^2))`,
//! whose density has its exponential folded into the scaled Bessel factor.

use super::density::noncentral_unit_density;
use super::{Method, SopEstimate};
use crate::chanmodel::{CorrelationSpec, SystemConfig};
use crate::combine::{CombinerKind, TasMode};
use crate::error::{domain, Error, Result};
use crate::specfun::{marcum_p, try_quad_adaptive_semi_infinite, try_quad_semi_infinite, Precision};

fn check_exact(cfg: &SystemConfig, lambda_e: f64) -> Result<()> {
    cfg.validate()?;
    if cfg.n_t != 1 {
        return domain("exact SOP is available for a single transmit antenna only");
    }
    if !(lambda_e.abs() < 1.0) {
        return domain(format!("exact SOP needs |lambda_e| < 1, got {lambda_e}"));
    }
    Ok(())
}

type Rule = fn(&mut dyn FnMut(f64) -> Result<f64>, &Precision) -> Result<f64>;

fn laguerre(f: &mut dyn FnMut(f64) -> Result<f64>, prec: &Precision) -> Result<f64> {
    try_quad_semi_infinite(f, prec)
}

fn adaptive(f: &mut dyn FnMut(f64) -> Result<f64>, prec: &Precision) -> Result<f64> {
    try_quad_adaptive_semi_infinite(f, prec)
}

// E_t E_{y|t} [cdf(threshold(y), t)], where cdf returns P(gamma_B < g | t).
// Gauss-Laguerre first; when a branch coefficient is close to 1 the
// conditional CDF is nearly a step and only the adaptive rule converges.
fn outage_integral(
    cfg: &SystemConfig,
    lambda_e: f64,
    prec: &Precision,
    cdf: impl Fn(f64, f64) -> Result<f64>,
) -> Result<f64> {
    match outage_integral_with(cfg, lambda_e, prec, &cdf, laguerre) {
        Err(Error::NonConvergence { .. }) => outage_integral_with(cfg, lambda_e, prec, &cdf, adaptive),
        other => other,
    }
}

fn outage_integral_with(
    cfg: &SystemConfig,
    lambda_e: f64,
    prec: &Precision,
    cdf: &impl Fn(f64, f64) -> Result<f64>,
    rule: Rule,
) -> Result<f64> {
    let l2 = lambda_e * lambda_e;
    let theta = cfg.gamma_e * (1.0 - l2);
    let c = cfg.n_e as f64 * l2 / (1.0 - l2);
    let rf = cfg.rate_factor();
    // Integrands are bounded by their weights; points below this cannot move
    // the sum by more than abs_tol.
    let negligible = prec.abs_tol * 1e-3;
    rule(
        &mut |t| {
            let weight = (-t).exp();
            if weight < negligible {
                return Ok(0.0);
            }
            let s = c * t;
            let inner = rule(
                &mut |u| {
                    let density = noncentral_unit_density(u, s, cfg.n_e, prec)?;
                    if density < negligible {
                        return Ok(0.0);
                    }
                    let g = rf * (theta * u + 1.0) - 1.0;
                    Ok(density * cdf(g, t)?)
                },
                prec,
            )?;
            Ok(weight * inner)
        },
        prec,
    )
}

/// Exact SOP of MRC when every legitimate branch has the coefficient `rho`
/// (pairwise branch correlation `rho^2`).
///
/// Needs `N_t = 1`; any eavesdropper antenna count is accepted.
pub fn exact_sop_mrc_equicorrelated(
    cfg: &SystemConfig,
    rho: f64,
    lambda_e: f64,
    prec: &Precision,
) -> Result<SopEstimate> {
    check_exact(cfg, lambda_e)?;
    if !(rho.abs() < 1.0) {
        return domain(format!("exact MRC needs |rho| < 1, got {rho}"));
    }
    let private = 1.0 - rho * rho;
    let m = cfg.m;
    let nc = 2.0 * m as f64 * rho * rho / private;
    let value = outage_integral(cfg, lambda_e, prec, |g, t| {
        let a = (nc * t).sqrt();
        let b = (2.0 * g / (cfg.gamma_b * private)).sqrt();
        marcum_p(m, a, b, prec)
    })?;
    Ok(SopEstimate::new(value.clamp(0.0, 1.0), Method::Exact, cfg, CombinerKind::Mrc, TasMode::Simo))
}

/// Exact SOP of SC for arbitrary coefficients: given `t` the branch SNRs are
/// independent, so the conditional CDF of the maximum is the product of the
/// per-branch CDFs.
pub fn exact_sop_sc(cfg: &SystemConfig, spec: &CorrelationSpec, prec: &Precision) -> Result<SopEstimate> {
    check_exact(cfg, spec.lambda_e)?;
    if spec.fully_correlated_main || spec.fully_correlated_eve {
        return domain("exact SC needs |eta| < 1 and |lambda_e| < 1");
    }
    spec.validate_for(cfg)?;
    let branches: Vec<(f64, f64)> = spec
        .eta
        .iter()
        .map(|e| {
            let private = 1.0 - e * e;
            (2.0 * e * e / private, 2.0 / (cfg.gamma_b * private))
        })
        .collect();
    let value = outage_integral(cfg, spec.lambda_e, prec, |g, t| {
        let mut p = 1.0;
        for &(nc, scale) in &branches {
            p *= marcum_p(1, (nc * t).sqrt(), (scale * g).sqrt(), prec)?;
            if p == 0.0 {
                break;
            }
        }
        Ok(p)
    })?;
    Ok(SopEstimate::new(value.clamp(0.0, 1.0), Method::Exact, cfg, CombinerKind::Sc, TasMode::Simo))
}
