//! High-SNR secrecy outage of a single transmit antenna.
//!
//! With `r = (1 + S_lambda) / (1 + S)` the leading term is
//!
//! `c_K * gE^M / (det U * gB^M) * sum_k r^k 2^{Rk} ((2^R - 1) / gE)^{M-k} / (M-k)!`
//!
//! where `c_K` is 1 for MRC, `M!` for SC and `M! (2M)^M / (2M)!` for EGC.

use super::{ln_combiner_gain, ln_pow, log_sum_exp, Method, SopEstimate};
use crate::chanmodel::{main_factors, CorrelationSpec, DerivedFactors, SystemConfig};
use crate::combine::{CombinerKind, TasMode};
use crate::error::{domain, Result};
use crate::specfun::{factorial, ln_factorial};

/// Parameter settings with a dedicated closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimoCase {
    /// Eavesdropper uncorrelated with the main link.
    LambdaZero,
    /// Uncorrelated legitimate branches.
    Independent,
    /// All legitimate branches identical (`|eta| = 1`), `lambda_e = 0`.
    FullyCorrMain,
    /// Eavesdropper identical to the shared component (`|lambda_e| = 1`).
    FullyCorrEve,
}

/// Which reference an SOP is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioKind {
    /// Correlated main and eavesdropper links vs main-link correlation only.
    CorrVsCmc,
    /// Correlated links vs fully independent ones.
    CorrVsIndep,
}

fn check_simo(cfg: &SystemConfig, n_eta: usize) -> Result<()> {
    cfg.validate()?;
    if cfg.n_t != 1 || cfg.n_e != 1 {
        return domain("single-antenna forms need N_t = 1 and N_E = 1; use the TAS forms");
    }
    if n_eta != cfg.m as usize {
        return domain(format!("expected {} coefficients, got {}", cfg.m, n_eta));
    }
    Ok(())
}

/// Leading-order SOP for `N_t = N_E = 1`.
///
/// `factors` may come from [`crate::derive_factors`] with `|lambda_e| = 1`,
/// which gives the eavesdropper-limit bound.
pub fn asymptotic_sop_simo(kind: CombinerKind, cfg: &SystemConfig, factors: &DerivedFactors) -> Result<SopEstimate> {
    check_simo(cfg, factors.eta.len())?;
    let m = cfg.m;
    let rf = cfg.rate_factor();
    let ln_scale = (rf * cfg.gamma_e * factors.weight_ratio()).ln();
    let terms: Vec<f64> = (0..=m)
        .map(|k| ln_pow(rf - 1.0, m - k) - ln_factorial(m - k) + k as f64 * ln_scale)
        .collect();
    let ln_value = log_sum_exp(&terms) + ln_combiner_gain(kind, m, 1)
        - factors.det_u.ln()
        - m as f64 * cfg.gamma_b.ln();
    Ok(SopEstimate::new(ln_value.exp(), Method::Asymptotic, cfg, kind, TasMode::Simo))
}

// Direct evaluation of the displayed sum for a given determinant and weight.
fn simo_direct(kind: CombinerKind, cfg: &SystemConfig, det: f64, r: f64) -> f64 {
    let m = cfg.m as i32;
    let rf = cfg.rate_factor();
    let mut sum = 0.0;
    for k in 0..=m {
        sum += r.powi(k) * rf.powi(k) * ((rf - 1.0) / cfg.gamma_e).powi(m - k)
            / factorial((m - k) as u32);
    }
    let mf = cfg.m as f64;
    let prefactor = match kind {
        CombinerKind::Mrc => 1.0,
        CombinerKind::Sc => factorial(cfg.m),
        CombinerKind::Egc => factorial(cfg.m) * (2.0 * mf).powf(mf) / factorial(2 * cfg.m),
    };
    prefactor * (cfg.gamma_e / cfg.gamma_b).powi(m) / det * sum
}

/// Closed forms for the special parameter settings. `spec` must match `case`.
pub fn asymptotic_sop_simo_special(
    kind: CombinerKind,
    cfg: &SystemConfig,
    spec: &CorrelationSpec,
    case: SimoCase,
) -> Result<SopEstimate> {
    check_simo(cfg, spec.eta.len())?;
    let value = match case {
        SimoCase::LambdaZero => {
            if spec.fully_correlated_main || spec.fully_correlated_eve || spec.lambda_e != 0.0 {
                return domain("lambda_zero needs lambda_e = 0 and no fully-correlated flags");
            }
            simo_direct(kind, cfg, main_factors(&spec.eta)?.det_u, 1.0)
        }
        SimoCase::Independent => {
            if spec.fully_correlated_main || spec.eta.iter().any(|e| *e != 0.0) {
                return domain("independent case needs all eta = 0");
            }
            simo_direct(kind, cfg, 1.0, 1.0)
        }
        SimoCase::FullyCorrMain => {
            if !spec.fully_correlated_main || spec.fully_correlated_eve || spec.lambda_e != 0.0 {
                return domain("fully_corr_main needs the main-link flag and lambda_e = 0");
            }
            let rf = cfg.rate_factor();
            cfg.gamma_e / (kind.epsilon(cfg.m) * cfg.gamma_b) * (rf + (rf - 1.0) / cfg.gamma_e)
        }
        SimoCase::FullyCorrEve => {
            if !spec.fully_correlated_eve || spec.fully_correlated_main {
                return domain("fully_corr_eve needs the eavesdropper flag only");
            }
            let f = main_factors(&spec.eta)?;
            simo_direct(kind, cfg, f.det_u, 1.0 / (1.0 + f.s))
        }
    };
    Ok(SopEstimate::new(value, Method::Asymptotic, cfg, kind, TasMode::Simo))
}

/// High-SNR SOP ratio between correlation scenarios; combiner independent.
pub fn sop_ratio(cfg: &SystemConfig, factors: &DerivedFactors, comparison: RatioKind) -> f64 {
    let base = factors.weight_ratio().powi(cfg.m as i32);
    match comparison {
        RatioKind::CorrVsCmc => base,
        RatioKind::CorrVsIndep => base / factors.det_u,
    }
}
