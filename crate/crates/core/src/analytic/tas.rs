//! Transmit antenna selection, with and without eavesdropper CSI.
//!
//! Without eavesdropper CSI the selected antenna maximises the legitimate SNR
//! and the high-SNR SOP is a single sum of order `K = M N_t`:
//!
//! `sum_w C(K, w) (2^R - 1)^{K-w} Gamma(N_E + w) (2^R gE (1 - l^2))^w 2F1(1, N_E + w; N_E; z)`
//!
//! with `z = N_E l^2 / (alpha (1 - l^2))`. With eavesdropper CSI every antenna
//! must be in outage, so the SOP is the single-antenna value to the power `N_t`.

use super::{ln_combiner_gain, ln_pow, log_sum_exp, Method, SopEstimate};
use crate::chanmodel::{DerivedFactors, SystemConfig};
use crate::combine::{CombinerKind, TasMode};
use crate::error::{domain, Error, Result};
use crate::specfun::{hyp2f1, ln_binomial, ln_factorial, ln_gamma, Precision};

fn check_tas(cfg: &SystemConfig, factors: &DerivedFactors) -> Result<()> {
    cfg.validate()?;
    if factors.eta.len() != cfg.m as usize {
        return domain(format!("expected {} coefficients, got {}", cfg.m, factors.eta.len()));
    }
    if factors.n_e != cfg.n_e {
        return domain("factors were derived for a different eavesdropper antenna count");
    }
    if !(factors.lambda_e.abs() < 1.0) {
        return Err(Error::DegenerateCorrelation(
            "|lambda_e| = 1 has no TAS closed form; use the fully correlated form".into(),
        ));
    }
    Ok(())
}

// ln of the w-th term of the order-k sum.
fn ln_term(k: u32, w: u32, cfg: &SystemConfig, factors: &DerivedFactors, prec: &Precision) -> Result<f64> {
    let n_e = cfg.n_e as f64;
    let rf = cfg.rate_factor();
    let l2 = factors.lambda_e * factors.lambda_e;
    let hyp = hyp2f1(1.0, n_e + w as f64, n_e, factors.z(), prec)?;
    Ok(ln_binomial(k, w)
        + ln_pow(rf - 1.0, k - w)
        + ln_gamma(n_e + w as f64)
        + w as f64 * (rf * cfg.gamma_e * (1.0 - l2)).ln()
        + hyp.ln())
}

fn ln_sum(k: u32, cfg: &SystemConfig, factors: &DerivedFactors, prec: &Precision) -> Result<f64> {
    let terms = (0..=k)
        .map(|w| ln_term(k, w, cfg, factors, prec))
        .collect::<Result<Vec<_>>>()?;
    Ok(log_sum_exp(&terms))
}

// ln of the prefactor for `n_t` antennas selected on the legitimate SNR.
fn ln_prefactor(kind: CombinerKind, n_t: u32, cfg: &SystemConfig, factors: &DerivedFactors) -> f64 {
    let m = cfg.m;
    let ntf = n_t as f64;
    -(factors.prod_private.ln()
        + (ntf - 1.0) * factors.det_u.ln()
        + ntf * ln_factorial(m)
        + ln_gamma(cfg.n_e as f64)
        + factors.alpha.ln()
        + (m * n_t) as f64 * cfg.gamma_b.ln())
        + ln_combiner_gain(kind, m, n_t)
}

/// Leading-order SOP when the antenna is chosen on the legitimate SNR only.
pub fn asymptotic_sop_tas_no_csi(
    kind: CombinerKind,
    cfg: &SystemConfig,
    factors: &DerivedFactors,
    prec: &Precision,
) -> Result<SopEstimate> {
    check_tas(cfg, factors)?;
    let ln_value = ln_prefactor(kind, cfg.n_t, cfg, factors) + ln_sum(cfg.m * cfg.n_t, cfg, factors, prec)?;
    let mode = if cfg.n_t == 1 { TasMode::Simo } else { TasMode::TasNoEveCsi };
    Ok(SopEstimate::new(ln_value.exp(), Method::Asymptotic, cfg, kind, mode))
}

/// Leading-order SOP when the antenna maximising the secrecy capacity is chosen.
pub fn asymptotic_sop_tas_with_csi(
    kind: CombinerKind,
    cfg: &SystemConfig,
    factors: &DerivedFactors,
    prec: &Precision,
) -> Result<SopEstimate> {
    check_tas(cfg, factors)?;
    let per_antenna = ln_prefactor(kind, 1, cfg, factors) + ln_sum(cfg.m, cfg, factors, prec)?;
    let ln_value = cfg.n_t as f64 * per_antenna;
    let mode = if cfg.n_t == 1 { TasMode::Simo } else { TasMode::TasWithEveCsi };
    Ok(SopEstimate::new(ln_value.exp(), Method::Asymptotic, cfg, kind, mode))
}

/// Dispatches on `mode`. `Simo` requires `N_t = 1` and allows any `N_E`.
pub fn asymptotic_sop_tas(
    kind: CombinerKind,
    mode: TasMode,
    cfg: &SystemConfig,
    factors: &DerivedFactors,
    prec: &Precision,
) -> Result<SopEstimate> {
    match mode {
        TasMode::Simo if cfg.n_t != 1 => domain("SIMO mode needs N_t = 1"),
        TasMode::Simo | TasMode::TasNoEveCsi => asymptotic_sop_tas_no_csi(kind, cfg, factors, prec),
        TasMode::TasWithEveCsi => asymptotic_sop_tas_with_csi(kind, cfg, factors, prec),
    }
}

/// The `w = K` term alone: the SOP when the eavesdropper SNR is also large.
pub fn sop_tas_high_eve_snr(
    kind: CombinerKind,
    mode: TasMode,
    cfg: &SystemConfig,
    factors: &DerivedFactors,
    prec: &Precision,
) -> Result<SopEstimate> {
    check_tas(cfg, factors)?;
    let ln_value = match mode {
        TasMode::Simo if cfg.n_t != 1 => return domain("SIMO mode needs N_t = 1"),
        TasMode::Simo | TasMode::TasNoEveCsi => {
            let k = cfg.m * cfg.n_t;
            ln_prefactor(kind, cfg.n_t, cfg, factors) + ln_term(k, k, cfg, factors, prec)?
        }
        TasMode::TasWithEveCsi => {
            let per = ln_prefactor(kind, 1, cfg, factors) + ln_term(cfg.m, cfg.m, cfg, factors, prec)?;
            cfg.n_t as f64 * per
        }
    };
    Ok(SopEstimate::new(ln_value.exp(), Method::Asymptotic, cfg, kind, mode))
}

/// SOP when every gain equals the shared component (both links fully
/// correlated). Valid for either selection rule.
pub fn sop_tas_fully_correlated(kind: CombinerKind, cfg: &SystemConfig) -> Result<SopEstimate> {
    cfg.validate()?;
    let rf = cfg.rate_factor();
    let margin = kind.epsilon(cfg.m) * cfg.gamma_b - rf * cfg.n_e as f64 * cfg.gamma_e;
    if margin <= 0.0 {
        return Err(Error::SecrecyInfeasible(format!(
            "legitimate gain {} does not exceed 2^R_s N_E gamma_E = {}",
            kind.epsilon(cfg.m) * cfg.gamma_b,
            rf * cfg.n_e as f64 * cfg.gamma_e
        )));
    }
    let per_antenna = -(-(rf - 1.0) / margin).exp_m1();
    let value = per_antenna.powi(cfg.n_t as i32);
    let mode = if cfg.n_t == 1 { TasMode::Simo } else { TasMode::TasNoEveCsi };
    Ok(SopEstimate::new(value, Method::Exact, cfg, kind, mode))
}

/// High-SNR ratio `SOP(N_E) / SOP(N_E = 1)` of TAS without eavesdropper CSI,
/// both evaluated with the eavesdropper SNR large as well.
///
/// `Gamma(K + N) / (Gamma(N) Gamma(K + 1)) * (a_1 / a_N) * ((1 + S) / a_1)^{K+1}
/// * 2F1(1, K + N; N; z_N)` with `K = M N_t` and `a_N` the value of `alpha`
/// for `N` eavesdropper antennas.
pub fn eve_antenna_penalty(cfg: &SystemConfig, factors: &DerivedFactors, prec: &Precision) -> Result<f64> {
    check_tas(cfg, factors)?;
    let k = (cfg.m * cfg.n_t) as f64;
    let n = cfg.n_e as f64;
    let l2 = factors.lambda_e * factors.lambda_e;
    let alpha_1 = 1.0 + factors.s + l2 / (1.0 - l2);
    let hyp = hyp2f1(1.0, k + n, n, factors.z(), prec)?;
    let ln_ratio = ln_gamma(k + n) - ln_gamma(n) - ln_gamma(k + 1.0) + alpha_1.ln() - factors.alpha.ln()
        + (k + 1.0) * ((1.0 + factors.s).ln() - alpha_1.ln())
        + hyp.ln();
    Ok(ln_ratio.exp())
}
