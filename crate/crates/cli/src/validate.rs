//! Built-in cross-checks: closed-form identities, special-case reductions,
//! slopes, orderings, and Monte Carlo against exact values.

use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use wiretap_core::analytic::{
    asymptotic_sop_simo, asymptotic_sop_simo_special, asymptotic_sop_tas, asymptotic_sop_tas_no_csi,
    asymptotic_sop_tas_with_csi, eve_antenna_penalty, exact_sop_mrc_equicorrelated, exact_sop_sc,
    sop_tas_fully_correlated, sop_tas_high_eve_snr, SimoCase,
};
use wiretap_core::chanmodel::main_factors;
use wiretap_core::mcsim::{estimate_sop, wilson_interval};
use wiretap_core::specfun::factorial;
use wiretap_core::{
    db_to_linear, derive_factors, CombinerKind, CorrelationSpec, Error, McPlan, Precision, SopEstimate,
    SystemConfig, TasMode,
};

use crate::error::{CliError, CliResult};

/// Strongly correlated three-antenna reference matrix, row-major.
pub const U1: [f64; 9] = [1.0, 0.765, -0.8075, 0.765, 1.0, -0.855, -0.8075, -0.855, 1.0];
/// Moderately correlated three-antenna reference matrix, row-major.
pub const U3: [f64; 9] = [1.0, -0.42, 0.48, -0.42, 1.0, -0.56, 0.48, -0.56, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// Scales the SC leading term by 1.05.
    ScPrefactor,
    /// Scales the EGC leading term by 1.05.
    EgcPrefactor,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ValidateConfig {
    pub mc_trials: u64,
    pub seed: u64,
    pub workers: usize,
    /// Negative control: corrupts one closed form before the checks run.
    pub inject_fault: Option<Fault>,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        ValidateConfig { mc_trials: 1_000_000, seed: 0, workers: 1, inject_fault: None }
    }
}

pub fn parse_validate_config(text: &str) -> CliResult<ValidateConfig> {
    let cfg: ValidateConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    McPlan::new(cfg.mc_trials, cfg.seed, cfg.workers).map_err(|e| CliError::Config(format!("validate: {e}")))?;
    Ok(cfg)
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn cfg(m: u32, n_t: u32, n_e: u32, gb_db: f64, ge_db: f64) -> wiretap_core::Result<SystemConfig> {
    SystemConfig::new(m, n_t, n_e, db_to_linear(gb_db), db_to_linear(ge_db), 1.0)
}

fn etas(m: u32) -> Vec<f64> {
    [0.6, -0.7, 0.8, 0.3, -0.5][..m as usize].to_vec()
}

type Outcome = wiretap_core::Result<(bool, String)>;

struct Runner {
    opts: ValidateConfig,
    prec: Precision,
}

impl Runner {
    fn faulted(&self, kind: CombinerKind, value: f64) -> f64 {
        match (self.opts.inject_fault, kind) {
            (Some(Fault::ScPrefactor), CombinerKind::Sc) | (Some(Fault::EgcPrefactor), CombinerKind::Egc) => {
                value * 1.05
            }
            _ => value,
        }
    }

    fn simo(&self, kind: CombinerKind, c: &SystemConfig, eta: &[f64], lam: f64) -> wiretap_core::Result<f64> {
        let v = asymptotic_sop_simo(kind, c, &derive_factors(eta, lam, c.n_e)?)?.value;
        Ok(self.faulted(kind, v))
    }

    fn mc(&self, c: &SystemConfig, spec: &CorrelationSpec, kind: CombinerKind, mode: TasMode) -> wiretap_core::Result<SopEstimate> {
        let plan = McPlan::new(self.opts.mc_trials, self.opts.seed, self.opts.workers)?;
        estimate_sop(c, spec, kind, mode, &plan)
    }

    fn determinants(&self) -> Outcome {
        let u1 = CorrelationSpec::from_correlation_matrix(&DMatrix::from_row_slice(3, 3, &U1), 0.0)?;
        let u3 = CorrelationSpec::from_correlation_matrix(&DMatrix::from_row_slice(3, 3, &U3), 0.0)?;
        let d1 = main_factors(&u1.eta)?.det_u;
        let d3 = main_factors(&u3.eta)?.det_u;
        let ok = (d1 - 0.088).abs() < 1e-3 && (d3 - 0.5054).abs() < 1e-3;
        Ok((ok, format!("det U1 = {d1:.6}, det U3 = {d3:.6}")))
    }

    fn determinant_identity(&self) -> Outcome {
        let mut rng = StdRng::seed_from_u64(self.opts.seed);
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let m = rng.random_range(1..=8);
            let eta: Vec<f64> = (0..m).map(|_| rng.random_range(-0.99..0.99)).collect();
            let f = main_factors(&eta)?;
            worst = worst.max(rel(f.det_u, f.det_direct()));
        }
        Ok((worst < 1e-10, format!("worst relative gap {worst:.3e} over 100 vectors")))
    }

    fn simo_combiner_ratios(&self) -> Outcome {
        let mut worst: f64 = 0.0;
        for m in 1..=5u32 {
            let c = cfg(m, 1, 1, 30.0, 5.0)?;
            let eta = etas(m);
            let mrc = self.simo(CombinerKind::Mrc, &c, &eta, 0.4)?;
            let sc = self.simo(CombinerKind::Sc, &c, &eta, 0.4)?;
            let egc = self.simo(CombinerKind::Egc, &c, &eta, 0.4)?;
            let mf = factorial(m);
            worst = worst.max(rel(sc / mrc, mf));
            worst = worst.max(rel(egc / mrc, mf * (2.0 * m as f64).powi(m as i32) / factorial(2 * m)));
        }
        Ok((worst < 1e-9, format!("SC/MRC = M!, EGC/MRC = M!(2M)^M/(2M)! for M = 1..5; worst {worst:.3e}")))
    }

    fn tas_csi_ratio(&self) -> Outcome {
        let mut worst: f64 = 0.0;
        for m in 1..=3u32 {
            for n_t in 1..=3u32 {
                let c = cfg(m, n_t, 1, 30.0, 5.0)?;
                let f = derive_factors(&etas(m), 0.4, 1)?;
                for k in CombinerKind::ALL {
                    let no = sop_tas_high_eve_snr(k, TasMode::TasNoEveCsi, &c, &f, &self.prec)?.value;
                    let with = sop_tas_high_eve_snr(k, TasMode::TasWithEveCsi, &c, &f, &self.prec)?.value;
                    worst = worst.max(rel(no / with, factorial(m * n_t) / factorial(m).powi(n_t as i32)));
                }
            }
        }
        Ok((worst < 1e-9, format!("no-CSI/with-CSI = (M N_t)!/(M!)^N_t; worst {worst:.3e}")))
    }

    fn reductions(&self) -> Outcome {
        let mut worst: f64 = 0.0;
        for m in 1..=4u32 {
            let c = cfg(m, 1, 1, 25.0, 5.0)?;
            let eta = etas(m);
            let zero = vec![0.0; m as usize];
            for k in CombinerKind::ALL {
                let cases = [
                    (&eta, 0.0, CorrelationSpec::new(eta.clone(), 0.0)?, SimoCase::LambdaZero),
                    (&zero, 0.0, CorrelationSpec::independent(m, 0.0)?, SimoCase::Independent),
                    (&eta, 1.0, CorrelationSpec::new(eta.clone(), 0.0)?.with_fully_correlated_eve(), SimoCase::FullyCorrEve),
                ];
                for (e, lam, spec, case) in cases {
                    let general = asymptotic_sop_simo(k, &c, &derive_factors(e, lam, 1)?)?.value;
                    let special = asymptotic_sop_simo_special(k, &c, &spec, case)?.value;
                    worst = worst.max(rel(general, special));
                }
                for lam in [0.0, 0.3, 0.8] {
                    let f = derive_factors(&eta, lam, 1)?;
                    let simo = asymptotic_sop_simo(k, &c, &f)?.value;
                    worst = worst.max(rel(asymptotic_sop_tas_no_csi(k, &c, &f, &self.prec)?.value, simo));
                    worst = worst.max(rel(asymptotic_sop_tas_with_csi(k, &c, &f, &self.prec)?.value, simo));
                }
            }
        }
        Ok((worst < 1e-12, format!("special cases and N_t = N_E = 1 TAS forms; worst {worst:.3e}")))
    }

    fn slopes(&self) -> Outcome {
        let mut worst: f64 = 0.0;
        for m in 1..=3u32 {
            for n_t in 1..=2u32 {
                let f = derive_factors(&etas(m), 0.5, 2)?;
                for k in CombinerKind::ALL {
                    for mode in [TasMode::TasNoEveCsi, TasMode::TasWithEveCsi] {
                        let mut pts = Vec::new();
                        for i in 0..=10 {
                            let db = 35.0 + i as f64;
                            pts.push((db, asymptotic_sop_tas(k, mode, &cfg(m, n_t, 2, db, 5.0)?, &f, &self.prec)?.value));
                        }
                        worst = worst.max(rel(fitted_slope(&pts), -((m * n_t) as f64)));
                    }
                }
            }
        }
        Ok((worst < 0.05, format!("log-log slope over 35..45 dB vs -M N_t; worst {worst:.3e}")))
    }

    fn eavesdropper_correlation(&self) -> Outcome {
        let c = cfg(3, 1, 1, 20.0, 3.0)?;
        let u3 = CorrelationSpec::from_correlation_matrix(&DMatrix::from_row_slice(3, 3, &U3), 0.0)?;
        let zero = [0.0; 3];
        let grid = [0.0, 0.3, 0.6, 0.9];
        let mut monotone = true;
        let mut last = f64::INFINITY;
        let mut values = Vec::new();
        for lam in grid {
            let v = self.simo(CombinerKind::Mrc, &c, &u3.eta, lam)?;
            monotone &= v <= last * (1.0 + 1e-12);
            last = v;
            values.push(v);
        }
        let indep_lo = self.simo(CombinerKind::Mrc, &c, &zero, 0.0)?;
        let indep_hi = self.simo(CombinerKind::Mrc, &c, &zero, 0.9)?;
        let crossing = values[0] > indep_lo && values[3] < indep_hi;
        Ok((
            monotone && crossing,
            format!(
                "U3 SOP over lambda {grid:?}: {}; independent {indep_lo:.4e} at 0, {indep_hi:.4e} at 0.9",
                values.iter().map(|v| format!("{v:.4e}")).collect::<Vec<_>>().join(", ")
            ),
        ))
    }

    fn csi_ordering(&self) -> Outcome {
        let mut ok = true;
        for m in 1..=3u32 {
            for n_t in 1..=3u32 {
                for n_e in [1u32, 3] {
                    for lam in [0.0, 0.5, 0.9] {
                        let c = cfg(m, n_t, n_e, 30.0, 5.0)?;
                        let f = derive_factors(&etas(m), lam, n_e)?;
                        for k in CombinerKind::ALL {
                            let no = asymptotic_sop_tas_no_csi(k, &c, &f, &self.prec)?.value;
                            let with = asymptotic_sop_tas_with_csi(k, &c, &f, &self.prec)?.value;
                            ok &= with <= no * (1.0 + 1e-12);
                        }
                    }
                }
            }
        }
        Ok((ok, "eavesdropper CSI never raises the TAS outage".into()))
    }

    fn eve_penalty(&self) -> Outcome {
        let mut ok = true;
        for (m, n_t) in [(1u32, 1u32), (2, 1), (2, 2), (3, 2)] {
            for lam in [0.0, 0.4, 0.8] {
                let mut last = 0.0;
                for n_e in 1..=8u32 {
                    let pen = eve_antenna_penalty(&cfg(m, n_t, n_e, 35.0, 5.0)?, &derive_factors(&etas(m), lam, n_e)?, &self.prec)?;
                    if n_e == 1 {
                        ok &= rel(pen, 1.0) < 1e-12;
                    }
                    ok &= pen >= last * (1.0 - 1e-12);
                    last = pen;
                }
            }
        }
        let three = eve_antenna_penalty(&cfg(2, 1, 2, 35.0, 5.0)?, &derive_factors(&[0.0, 0.0], 0.0, 2)?, &self.prec)?;
        ok &= rel(three, 3.0) < 1e-12;
        Ok((ok, format!("penalty is 1 at N_E = 1 and nondecreasing; M = 2, N_E = 2 uncorrelated gives {three}")))
    }

    fn infeasibility_guard(&self) -> Outcome {
        let mut ok = true;
        for (m, n_e, gb, ge) in [(2u32, 1u32, 10.0, 10.0), (3, 2, 20.0, 15.0), (1, 4, 80.0, 10.0), (3, 1, 7.0, 10.0)] {
            let c = SystemConfig::new(m, 1, n_e, gb, ge, 1.0)?;
            for k in CombinerKind::ALL {
                let infeasible = k.epsilon(m) * gb <= c.rate_factor() * n_e as f64 * ge;
                ok &= matches!(sop_tas_fully_correlated(k, &c), Err(Error::SecrecyInfeasible(_))) == infeasible;
            }
        }
        Ok((ok, "guard fires exactly when eps gB <= 2^R N_E gE".into()))
    }

    fn within(&self, est: &SopEstimate, want: f64) -> (bool, String) {
        let (k, n) = est.meta.counts.unwrap_or((0, 0));
        let (lo, hi) = wilson_interval(k, n, 3.0);
        (lo <= want && want <= hi, format!("MC {:.5e} [{lo:.5e}, {hi:.5e}] vs {want:.5e}", est.value))
    }

    fn mc_vs_exact_mrc(&self) -> Outcome {
        let c = cfg(3, 1, 1, 10.0, 5.0)?;
        let exact = exact_sop_mrc_equicorrelated(&c, 0.5, 0.5, &self.prec)?.value;
        let est = self.mc(&c, &CorrelationSpec::new(vec![0.5; 3], 0.5)?, CombinerKind::Mrc, TasMode::Simo)?;
        Ok(self.within(&est, exact))
    }

    fn mc_vs_exact_sc(&self) -> Outcome {
        let spec = CorrelationSpec::from_correlation_matrix(&DMatrix::from_row_slice(3, 3, &U1), 0.0)?;
        let c = cfg(3, 1, 1, 20.0, 10.0)?;
        let exact = exact_sop_sc(&c, &spec, &self.prec)?.value;
        let est = self.mc(&c, &spec, CombinerKind::Sc, TasMode::Simo)?;
        Ok(self.within(&est, exact))
    }

    fn mc_vs_fully_correlated(&self) -> Outcome {
        let spec = CorrelationSpec::fully_correlated_main(2, 0.0)?.with_fully_correlated_eve();
        let c = SystemConfig::new(2, 2, 1, 10.0, 1.0, 1.0)?;
        let mut ok = true;
        let mut details = Vec::new();
        for k in CombinerKind::ALL {
            let want = sop_tas_fully_correlated(k, &c)?.value;
            for mode in [TasMode::TasNoEveCsi, TasMode::TasWithEveCsi] {
                let (pass, d) = self.within(&self.mc(&c, &spec, k, mode)?, want);
                ok &= pass;
                details.push(format!("{k} {mode}: {d}"));
            }
        }
        Ok((ok, details.join("; ")))
    }
}

/// Least-squares slope of `log10(sop)` against dB, times 10.
pub fn fitted_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1.log10()).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1.log10() - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    10.0 * sxy / sxx
}

/// Runs every check. Numerical errors inside a check mark it failed.
pub fn run_validation(opts: &ValidateConfig) -> Report {
    let runner = Runner { opts: opts.clone(), prec: Precision::default() };
    let suite: [(&'static str, fn(&Runner) -> Outcome); 13] = [
        ("determinants", Runner::determinants),
        ("determinant_identity", Runner::determinant_identity),
        ("simo_combiner_ratios", Runner::simo_combiner_ratios),
        ("tas_csi_ratio", Runner::tas_csi_ratio),
        ("reductions", Runner::reductions),
        ("diversity_slopes", Runner::slopes),
        ("eavesdropper_correlation", Runner::eavesdropper_correlation),
        ("csi_ordering", Runner::csi_ordering),
        ("eve_antenna_penalty", Runner::eve_penalty),
        ("infeasibility_guard", Runner::infeasibility_guard),
        ("mc_vs_exact_mrc", Runner::mc_vs_exact_mrc),
        ("mc_vs_exact_sc", Runner::mc_vs_exact_sc),
        ("mc_vs_fully_correlated", Runner::mc_vs_fully_correlated),
    ];
    let checks: Vec<Check> = suite
        .iter()
        .map(|(name, f)| {
            let (passed, detail) = f(&runner).unwrap_or_else(|e| (false, format!("error: {e}")));
            Check { name, passed, detail }
        })
        .collect();
    Report { passed: checks.iter().all(|c| c.passed), checks }
}
