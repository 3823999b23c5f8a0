//! Exact integrals, high-SNR closed forms and the densities behind them.

mod density;
mod exact;
mod simo;
mod tas;

pub use density::{
    joint_pdf_tas_mrc, pdf_conditional_egc_asym, pdf_conditional_eve, pdf_conditional_mrc_asym,
};
pub use exact::{exact_sop_mrc_equicorrelated, exact_sop_sc};
pub use simo::{asymptotic_sop_simo, asymptotic_sop_simo_special, sop_ratio, RatioKind, SimoCase};
pub use tas::{
    asymptotic_sop_tas, asymptotic_sop_tas_no_csi, asymptotic_sop_tas_with_csi,
    eve_antenna_penalty, sop_tas_fully_correlated, sop_tas_high_eve_snr,
};

use std::fmt;

use crate::chanmodel::SystemConfig;
use crate::combine::{CombinerKind, TasMode};
use crate::error::{domain, Result};

/// How an estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    Asymptotic,
    MonteCarlo,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::Asymptotic => "asymptotic",
            Method::MonteCarlo => "montecarlo",
        })
    }
}

/// Configuration the estimate belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct SopMeta {
    pub cfg: SystemConfig,
    pub combiner: CombinerKind,
    pub mode: TasMode,
    /// Monte Carlo only: `(outage events, trials)`.
    pub counts: Option<(u64, u64)>,
}

/// A secrecy outage probability.
///
/// Asymptotic values are raw leading-order terms and can exceed 1 at low SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct SopEstimate {
    pub value: f64,
    pub method: Method,
    pub ci95: Option<(f64, f64)>,
    pub meta: SopMeta,
}

impl SopEstimate {
    pub(crate) fn new(value: f64, method: Method, cfg: &SystemConfig, combiner: CombinerKind, mode: TasMode) -> Self {
        SopEstimate {
            value,
            method,
            ci95: None,
            meta: SopMeta {
                cfg: cfg.clone(),
                combiner,
                mode,
                counts: None,
            },
        }
    }

    /// Value clamped to `[0, 1]` for display.
    pub fn clamped(&self) -> f64 {
        self.value.clamp(0.0, 1.0)
    }
}

/// Value of the conditioning variable `T = |Z|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionedState {
    pub t: f64,
}

impl ConditionedState {
    pub fn new(t: f64) -> Result<Self> {
        if !(t >= 0.0) || !t.is_finite() {
            return domain(format!("conditioning value must be finite and >= 0, got {t}"));
        }
        Ok(ConditionedState { t })
    }
}

/// `ln(base^k)` with `0^0 = 1`.
pub(crate) fn ln_pow(base: f64, k: u32) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * base.ln()
    }
}

/// `ln sum exp(x_i)` without overflow; `-inf` for an empty or all-zero sum.
pub(crate) fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Log of the combiner constant relative to MRC for `n_t` selected antennas:
/// SC `(M!)^{N_t}`, EGC `(M! (2M)^M / (2M)!)^{N_t}`.
pub(crate) fn ln_combiner_gain(kind: CombinerKind, m: u32, n_t: u32) -> f64 {
    use crate::specfun::ln_factorial;
    let per_antenna = match kind {
        CombinerKind::Mrc => 0.0,
        CombinerKind::Sc => ln_factorial(m),
        CombinerKind::Egc => {
            ln_factorial(m) + m as f64 * (2.0 * m as f64).ln() - ln_factorial(2 * m)
        }
    };
    n_t as f64 * per_antenna
}
