//! Diversity combining, secrecy capacity and transmit antenna selection.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

/// Receive combining scheme of the legitimate user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CombinerKind {
    Mrc,
    Sc,
    Egc,
}

impl CombinerKind {
    pub const ALL: [CombinerKind; 3] = [CombinerKind::Mrc, CombinerKind::Sc, CombinerKind::Egc];

    /// Output SNR of this combiner when all `m` branches carry the same gain,
    /// as a multiple of the branch SNR.
    pub fn epsilon(self, m: u32) -> f64 {
        match self {
            CombinerKind::Mrc | CombinerKind::Egc => m as f64,
            CombinerKind::Sc => 1.0,
        }
    }

    /// Combined SNR from per-branch SNRs; no allocation, no validation.
    #[inline]
    pub fn combine_unchecked(self, branch_snrs: &[f64]) -> f64 {
        match self {
            CombinerKind::Mrc => branch_snrs.iter().sum(),
            CombinerKind::Sc => branch_snrs.iter().copied().fold(0.0, f64::max),
            CombinerKind::Egc => {
                let amp: f64 = branch_snrs.iter().map(|g| g.sqrt()).sum();
                amp * amp / branch_snrs.len() as f64
            }
        }
    }
}

impl fmt::Display for CombinerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CombinerKind::Mrc => "MRC",
            CombinerKind::Sc => "SC",
            CombinerKind::Egc => "EGC",
        })
    }
}

impl FromStr for CombinerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "MRC" => Ok(CombinerKind::Mrc),
            "SC" => Ok(CombinerKind::Sc),
            "EGC" => Ok(CombinerKind::Egc),
            _ => domain(format!("unknown combiner '{s}' (expected MRC, SC or EGC)")),
        }
    }
}

/// How the transmit antenna is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TasMode {
    /// Single transmit antenna.
    Simo,
    /// Pick the antenna with the best legitimate SNR.
    TasNoEveCsi,
    /// Pick the antenna maximising `(1 + g_B) / (1 + g_E)`.
    TasWithEveCsi,
}

impl fmt::Display for TasMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TasMode::Simo => "simo",
            TasMode::TasNoEveCsi => "tas_no_eve_csi",
            TasMode::TasWithEveCsi => "tas_with_eve_csi",
        })
    }
}

impl FromStr for TasMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simo" => Ok(TasMode::Simo),
            "tas_no_eve_csi" => Ok(TasMode::TasNoEveCsi),
            "tas_with_eve_csi" => Ok(TasMode::TasWithEveCsi),
            _ => domain(format!(
                "unknown TAS mode '{s}' (expected simo, tas_no_eve_csi or tas_with_eve_csi)"
            )),
        }
    }
}

fn check_snrs(snrs: &[f64]) -> Result<()> {
    if snrs.is_empty() {
        return domain("no branch SNRs given");
    }
    if let Some(bad) = snrs.iter().find(|g| !(**g >= 0.0) || !g.is_finite()) {
        return domain(format!("branch SNR must be finite and non-negative, got {bad}"));
    }
    Ok(())
}

/// MRC sums, SC takes the maximum, EGC returns `(sum sqrt(g))^2 / M`.
pub fn combined_snr(kind: CombinerKind, branch_snrs: &[f64]) -> Result<f64> {
    check_snrs(branch_snrs)?;
    Ok(kind.combine_unchecked(branch_snrs))
}

/// Eavesdropper MRC output.
pub fn eve_snr(branch_snrs: &[f64]) -> Result<f64> {
    combined_snr(CombinerKind::Mrc, branch_snrs)
}

/// `max(0, log2(1 + g_B) - log2(1 + g_E))`.
pub fn secrecy_capacity(gamma_b: f64, gamma_e: f64) -> f64 {
    ((1.0 + gamma_b).log2() - (1.0 + gamma_e).log2()).max(0.0)
}

/// Outage happens when `g_B < 2^R (1 + g_E) - 1`.
#[inline]
pub fn in_outage(gamma_b: f64, gamma_e: f64, rate_factor: f64) -> bool {
    gamma_b < rate_factor * (1.0 + gamma_e) - 1.0
}

/// Index of the selected transmit antenna given the per-antenna combined SNRs.
pub fn select_antenna(mode: TasMode, gamma_b: &[f64], gamma_e: &[f64]) -> Result<usize> {
    check_snrs(gamma_b)?;
    if gamma_e.len() != gamma_b.len() {
        return domain("legitimate and eavesdropper SNR lists differ in length");
    }
    check_snrs(gamma_e)?;
    match mode {
        TasMode::Simo if gamma_b.len() != 1 => {
            domain("SIMO mode needs exactly one transmit antenna")
        }
        _ => Ok(select_unchecked(mode, gamma_b, gamma_e)),
    }
}

#[inline]
pub(crate) fn select_unchecked(mode: TasMode, gamma_b: &[f64], gamma_e: &[f64]) -> usize {
    let score = |i: usize| match mode {
        TasMode::TasWithEveCsi => (1.0 + gamma_b[i]) / (1.0 + gamma_e[i]),
        _ => gamma_b[i],
    };
    let mut best = 0;
    let mut best_score = score(0);
    for i in 1..gamma_b.len() {
        let s = score(i);
        if s > best_score {
            best = i;
            best_score = s;
        }
    }
    best
}
