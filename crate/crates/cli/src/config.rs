//! Sweep configuration files.
//!
//! A config is a JSON object. Unknown keys are rejected. SNRs are given in dB
//! and converted to linear ratios here, once.
//!
//! ```json
//! {
//!   "gamma_b_db": [0, 5, 10, 15, 20],
//!   "gamma_e_db": 10,
//!   "m": 3,
//!   "combiners": ["MRC", "SC", "EGC"],
//!   "methods": ["asymptotic", "montecarlo"],
//!   "correlation": { "eta": [0.85, 0.9, -0.95], "lambda_e": 0.0 }
//! }
//! ```
//!
//! Optional keys: `n_t` (1), `n_e` (1), `r_s` (1.0), `tas_mode` (`"simo"`, a
//! mode name or a list of them), `lambda_e_grid`, `mc` (`trials`, `seed`,
//! `workers`), `precision` (`abs_tol`, `rel_tol`, `max_terms`, `quad_nodes`)
//! and `output`. Inside `correlation`, `u_matrix` may replace `eta`, and
//! `fully_correlated_main` / `fully_correlated_eve` select the unit-coefficient
//! limits.

use std::path::PathBuf;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::Deserialize;
use wiretap_core::{db_to_linear, CombinerKind, CorrelationSpec, McPlan, Method, Precision, SystemConfig, TasMode};

use crate::error::{CliError, CliResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    gamma_b_db: Vec<f64>,
    gamma_e_db: f64,
    m: u32,
    #[serde(default = "one")]
    n_t: u32,
    #[serde(default = "one")]
    n_e: u32,
    #[serde(default = "unit_rate")]
    r_s: f64,
    combiners: Vec<String>,
    #[serde(default)]
    tas_mode: Option<OneOrMany>,
    methods: Vec<String>,
    #[serde(default)]
    correlation: RawCorrelation,
    #[serde(default)]
    lambda_e_grid: Option<Vec<f64>>,
    #[serde(default)]
    mc: RawMc,
    #[serde(default)]
    precision: RawPrecision,
    #[serde(default)]
    output: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCorrelation {
    eta: Option<Vec<f64>>,
    u_matrix: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    lambda_e: f64,
    #[serde(default)]
    fully_correlated_main: bool,
    #[serde(default)]
    fully_correlated_eve: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawMc {
    trials: u64,
    seed: u64,
    workers: usize,
}

impl Default for RawMc {
    fn default() -> Self {
        RawMc { trials: 1_000_000, seed: 0, workers: 1 }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPrecision {
    abs_tol: Option<f64>,
    rel_tol: Option<f64>,
    max_terms: Option<usize>,
    quad_nodes: Option<usize>,
}

fn one() -> u32 {
    1
}

fn unit_rate() -> f64 {
    1.0
}

/// A grid value in dB and its linear ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snr {
    pub db: f64,
    pub linear: f64,
}

impl Snr {
    fn from_db(db: f64) -> Self {
        Snr { db, linear: db_to_linear(db) }
    }
}

/// A validated sweep.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub gamma_b: Vec<Snr>,
    pub gamma_e: Snr,
    pub m: u32,
    pub n_t: u32,
    pub n_e: u32,
    pub r_s: f64,
    pub combiners: Vec<CombinerKind>,
    pub tas_modes: Vec<TasMode>,
    pub methods: Vec<Method>,
    pub correlation: CorrelationSpec,
    /// When set, every row is repeated for each value and the CSV gains a
    /// trailing `lambda_e` column.
    pub lambda_grid: Option<Vec<f64>>,
    pub mc: McPlan,
    pub precision: Precision,
    pub output: Option<PathBuf>,
}

impl SweepSpec {
    /// System configuration at one grid SNR.
    pub fn system(&self, gamma_b: Snr) -> SystemConfig {
        SystemConfig {
            m: self.m,
            n_t: self.n_t,
            n_e: self.n_e,
            gamma_b: gamma_b.linear,
            gamma_e: self.gamma_e.linear,
            r_s: self.r_s,
        }
    }

    /// Eavesdropper coefficients swept (a single value without a grid).
    pub fn lambdas(&self) -> Vec<f64> {
        self.lambda_grid.clone().unwrap_or_else(|| vec![self.correlation.lambda_e])
    }

    /// Correlation with `lambda_e` replaced.
    pub fn correlation_at(&self, lambda_e: f64) -> CorrelationSpec {
        CorrelationSpec { lambda_e, ..self.correlation.clone() }
    }
}

fn cfg_err<T>(field: &str, msg: impl std::fmt::Display) -> CliResult<T> {
    Err(CliError::Config(format!("{field}: {msg}")))
}

pub fn parse_method(s: &str) -> Option<Method> {
    match s.to_ascii_lowercase().as_str() {
        "exact" => Some(Method::Exact),
        "asymptotic" => Some(Method::Asymptotic),
        "montecarlo" | "monte_carlo" | "mc" => Some(Method::MonteCarlo),
        _ => None,
    }
}

fn check_unique<T: PartialEq>(field: &str, items: &[T]) -> CliResult<()> {
    for (i, a) in items.iter().enumerate() {
        if items[..i].contains(a) {
            return cfg_err(&format!("{field}[{i}]"), "duplicate entry");
        }
    }
    Ok(())
}

/// Parses and validates a JSON config.
pub fn parse_config(text: &str) -> CliResult<SweepSpec> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;

    if raw.gamma_b_db.is_empty() {
        return cfg_err("gamma_b_db", "grid is empty");
    }
    for (i, v) in raw.gamma_b_db.iter().enumerate() {
        if !v.is_finite() {
            return cfg_err(&format!("gamma_b_db[{i}]"), "not a finite number");
        }
        if i > 0 && *v <= raw.gamma_b_db[i - 1] {
            return cfg_err(&format!("gamma_b_db[{i}]"), "grid must be strictly increasing");
        }
    }
    if !raw.gamma_e_db.is_finite() {
        return cfg_err("gamma_e_db", "not a finite number");
    }
    let gamma_b: Vec<Snr> = raw.gamma_b_db.iter().map(|&db| Snr::from_db(db)).collect();
    let gamma_e = Snr::from_db(raw.gamma_e_db);
    SystemConfig::new(raw.m, raw.n_t, raw.n_e, gamma_b[0].linear, gamma_e.linear, raw.r_s)
        .or_else(|e| cfg_err("system", e))?;

    if raw.combiners.is_empty() {
        return cfg_err("combiners", "need at least one combiner");
    }
    let combiners = raw
        .combiners
        .iter()
        .enumerate()
        .map(|(i, s)| CombinerKind::from_str(s).or_else(|e| cfg_err(&format!("combiners[{i}]"), e)))
        .collect::<CliResult<Vec<_>>>()?;
    check_unique("combiners", &combiners)?;

    if raw.methods.is_empty() {
        return cfg_err("methods", "need at least one method");
    }
    let methods = raw
        .methods
        .iter()
        .enumerate()
        .map(|(i, s)| {
            parse_method(s).map_or_else(
                || cfg_err(&format!("methods[{i}]"), format!("unknown method '{s}' (exact, asymptotic, montecarlo)")),
                Ok,
            )
        })
        .collect::<CliResult<Vec<_>>>()?;
    check_unique("methods", &methods)?;

    let mode_names = match raw.tas_mode {
        None => vec!["simo".to_string()],
        Some(OneOrMany::One(s)) => vec![s],
        Some(OneOrMany::Many(v)) => v,
    };
    if mode_names.is_empty() {
        return cfg_err("tas_mode", "need at least one mode");
    }
    let tas_modes = mode_names
        .iter()
        .map(|s| TasMode::from_str(s).or_else(|e| cfg_err("tas_mode", e)))
        .collect::<CliResult<Vec<_>>>()?;
    check_unique("tas_mode", &tas_modes)?;
    if raw.n_t != 1 && tas_modes.contains(&TasMode::Simo) {
        return cfg_err("tas_mode", "simo needs n_t = 1");
    }

    let correlation = build_correlation(&raw.correlation, raw.m)?;

    let lambda_grid = match raw.lambda_e_grid {
        None => None,
        Some(grid) => {
            if grid.is_empty() {
                return cfg_err("lambda_e_grid", "grid is empty");
            }
            if correlation.fully_correlated_eve {
                return cfg_err("lambda_e_grid", "cannot sweep lambda_e with fully_correlated_eve set");
            }
            for (i, &l) in grid.iter().enumerate() {
                CorrelationSpec::new(vec![0.0], l).or_else(|e| cfg_err(&format!("lambda_e_grid[{i}]"), e))?;
            }
            Some(grid)
        }
    };

    let mc = McPlan::new(raw.mc.trials, raw.mc.seed, raw.mc.workers).or_else(|e| cfg_err("mc", e))?;

    let d = Precision::default();
    let p = raw.precision;
    let precision = Precision {
        abs_tol: p.abs_tol.unwrap_or(d.abs_tol),
        rel_tol: p.rel_tol.unwrap_or(d.rel_tol),
        max_terms: p.max_terms.unwrap_or(d.max_terms),
        quad_nodes: p.quad_nodes.unwrap_or(d.quad_nodes),
    };
    precision.validate().or_else(|e| cfg_err("precision", e))?;

    let spec = SweepSpec {
        gamma_b,
        gamma_e,
        m: raw.m,
        n_t: raw.n_t,
        n_e: raw.n_e,
        r_s: raw.r_s,
        combiners,
        tas_modes,
        methods,
        correlation,
        lambda_grid,
        mc,
        precision,
        output: raw.output,
    };
    check_supported(&spec)?;
    Ok(spec)
}

fn build_correlation(raw: &RawCorrelation, m: u32) -> CliResult<CorrelationSpec> {
    let field = "correlation";
    let mut spec = match (&raw.eta, &raw.u_matrix) {
        (Some(_), Some(_)) => return cfg_err(field, "give either eta or u_matrix, not both"),
        (Some(eta), None) => {
            if eta.len() != m as usize {
                return cfg_err("correlation.eta", format!("expected {m} coefficients, got {}", eta.len()));
            }
            if raw.fully_correlated_main {
                return cfg_err("correlation.eta", "not used with fully_correlated_main");
            }
            CorrelationSpec::new(eta.clone(), 0.0).or_else(|e| cfg_err("correlation.eta", e))?
        }
        (None, Some(rows)) => {
            if raw.fully_correlated_main {
                return cfg_err("correlation.u_matrix", "not used with fully_correlated_main");
            }
            if rows.len() != m as usize || rows.iter().any(|r| r.len() != m as usize) {
                return cfg_err("correlation.u_matrix", format!("must be {m} x {m}"));
            }
            let u = DMatrix::from_fn(rows.len(), rows.len(), |i, j| rows[i][j]);
            CorrelationSpec::from_correlation_matrix(&u, 0.0).or_else(|e| cfg_err("correlation.u_matrix", e))?
        }
        (None, None) if raw.fully_correlated_main => {
            CorrelationSpec::fully_correlated_main(m, 0.0).or_else(|e| cfg_err(field, e))?
        }
        (None, None) => CorrelationSpec::independent(m, 0.0).or_else(|e| cfg_err(field, e))?,
    };
    if raw.fully_correlated_eve {
        if raw.lambda_e != 0.0 && raw.lambda_e.abs() != 1.0 {
            return cfg_err("correlation.lambda_e", "must be omitted, 1 or -1 with fully_correlated_eve");
        }
        spec.lambda_e = raw.lambda_e;
        spec = spec.with_fully_correlated_eve();
    } else {
        CorrelationSpec::new(vec![0.0], raw.lambda_e).or_else(|e| cfg_err("correlation.lambda_e", e))?;
        spec.lambda_e = raw.lambda_e;
    }
    Ok(spec)
}

// Rejects method/configuration pairs with no implemented evaluator.
fn check_supported(spec: &SweepSpec) -> CliResult<()> {
    let c = &spec.correlation;
    let flags = c.fully_correlated_main || c.fully_correlated_eve;
    for &method in &spec.methods {
        match method {
            Method::Exact => {
                if spec.n_t != 1 || flags {
                    return cfg_err(
                        "methods",
                        "exact is available only for n_t = 1 without fully-correlated flags",
                    );
                }
                for &k in &spec.combiners {
                    match k {
                        CombinerKind::Mrc if c.eta.windows(2).any(|w| w[0] != w[1]) => {
                            return cfg_err("methods", "exact MRC needs equal eta on every branch");
                        }
                        CombinerKind::Egc => {
                            return cfg_err("methods", "no exact form for EGC; use montecarlo");
                        }
                        _ => {}
                    }
                }
            }
            Method::Asymptotic => match (c.fully_correlated_main, c.fully_correlated_eve) {
                (true, false) if spec.n_t != 1 || spec.n_e != 1 || c.lambda_e != 0.0 || spec.lambda_grid.is_some() => {
                    return cfg_err(
                        "methods",
                        "asymptotic with fully_correlated_main needs n_t = n_e = 1 and lambda_e = 0",
                    );
                }
                (false, true) if spec.n_t != 1 || spec.n_e != 1 => {
                    return cfg_err("methods", "asymptotic with fully_correlated_eve needs n_t = n_e = 1");
                }
                _ => {}
            },
            Method::MonteCarlo => {}
        }
    }
    Ok(())
}
