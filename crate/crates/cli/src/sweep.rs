//! Grid evaluation and CSV output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use rayon::prelude::*;
use wiretap_core::analytic::{
    asymptotic_sop_simo, asymptotic_sop_simo_special, asymptotic_sop_tas, exact_sop_mrc_equicorrelated,
    exact_sop_sc, sop_tas_fully_correlated, SimoCase,
};
use wiretap_core::mcsim::estimate_sop;
use wiretap_core::{build_factors, derive_factors, CombinerKind, Error, Method, TasMode};

use crate::config::{Snr, SweepSpec};
use crate::error::{CliError, CliResult};

pub const OUTSIDE_REGIME: &str = "outside-asymptotic-regime";
pub const INFEASIBLE: &str = "secrecy-infeasible";

/// One output row.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub gamma_b_db: f64,
    /// Set only when the sweep has a `lambda_e` grid.
    pub lambda_e: Option<f64>,
    pub combiner: CombinerKind,
    pub tas_mode: TasMode,
    pub method: Method,
    /// Raw value; leading-order terms may exceed 1.
    pub sop: f64,
    pub ci: Option<(f64, f64)>,
    pub regime_flag: &'static str,
}

#[derive(Debug, Clone, Copy)]
struct Task {
    lambda_e: f64,
    gamma_b: Snr,
    combiner: CombinerKind,
    mode: TasMode,
    method: Method,
}

/// Evaluates every grid point. Rows come back in grid order (lambda, SNR,
/// combiner, mode, method) whatever the worker count.
pub fn run_sweep(spec: &SweepSpec) -> CliResult<Vec<CurvePoint>> {
    let mut tasks = Vec::new();
    for lambda_e in spec.lambdas() {
        for &gamma_b in &spec.gamma_b {
            for &combiner in &spec.combiners {
                for &mode in &spec.tas_modes {
                    for &method in &spec.methods {
                        tasks.push(Task { lambda_e, gamma_b, combiner, mode, method });
                    }
                }
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.mc.workers)
        .build()
        .map_err(|e| CliError::Numerical(format!("cannot start worker pool: {e}")))?;
    pool.install(|| tasks.par_iter().map(|t| evaluate(spec, t)).collect())
}

fn evaluate(spec: &SweepSpec, task: &Task) -> CliResult<CurvePoint> {
    let cfg = spec.system(task.gamma_b);
    let corr = spec.correlation_at(task.lambda_e);
    let kind = task.combiner;
    let mut point = CurvePoint {
        gamma_b_db: task.gamma_b.db,
        lambda_e: spec.lambda_grid.as_ref().map(|_| task.lambda_e),
        combiner: kind,
        tas_mode: task.mode,
        method: task.method,
        sop: 0.0,
        ci: None,
        regime_flag: "",
    };
    match task.method {
        Method::MonteCarlo => {
            let est = estimate_sop(&cfg, &corr, kind, task.mode, &spec.mc)?;
            point.sop = est.value;
            point.ci = est.ci95;
        }
        Method::Exact => {
            let est = match kind {
                CombinerKind::Mrc => exact_sop_mrc_equicorrelated(&cfg, corr.eta[0], corr.lambda_e, &spec.precision)?,
                CombinerKind::Sc => exact_sop_sc(&cfg, &corr, &spec.precision)?,
                CombinerKind::Egc => return Err(CliError::Config("no exact form for EGC".into())),
            };
            point.sop = est.value;
        }
        Method::Asymptotic => {
            let single = cfg.n_t == 1 && cfg.n_e == 1;
            let est = match (corr.fully_correlated_main, corr.fully_correlated_eve) {
                (true, true) => match sop_tas_fully_correlated(kind, &cfg) {
                    Err(Error::SecrecyInfeasible(_)) => {
                        point.sop = 1.0;
                        point.regime_flag = INFEASIBLE;
                        return Ok(point);
                    }
                    other => other?,
                },
                (true, false) => asymptotic_sop_simo_special(kind, &cfg, &corr, SimoCase::FullyCorrMain)?,
                (false, true) => asymptotic_sop_simo(kind, &cfg, &derive_factors(&corr.eta, 1.0, 1)?)?,
                (false, false) => {
                    let factors = build_factors(&corr, &cfg)?;
                    if single {
                        asymptotic_sop_simo(kind, &cfg, &factors)?
                    } else {
                        asymptotic_sop_tas(kind, task.mode, &cfg, &factors, &spec.precision)?
                    }
                }
            };
            point.sop = est.value;
            if est.value > 0.5 {
                point.regime_flag = OUTSIDE_REGIME;
            }
        }
    }
    Ok(point)
}

/// CSV text with a header row and LF line endings.
pub fn to_csv(points: &[CurvePoint]) -> String {
    let with_lambda = points.first().is_some_and(|p| p.lambda_e.is_some());
    let mut out = String::from("gamma_b_db,combiner,tas_mode,method,sop,ci_low,ci_high,regime_flag");
    if with_lambda {
        out.push_str(",lambda_e");
    }
    out.push('\n');
    for p in points {
        let (lo, hi) = match p.ci {
            Some((lo, hi)) => (format!("{lo:.8e}"), format!("{hi:.8e}")),
            None => (String::new(), String::new()),
        };
        let _ = write!(
            out,
            "{},{},{},{},{:.8e},{lo},{hi},{}",
            p.gamma_b_db, p.combiner, p.tas_mode, p.method, p.sop, p.regime_flag
        );
        if let Some(l) = p.lambda_e {
            let _ = write!(out, ",{l}");
        }
        out.push('\n');
    }
    out
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn rows_follow_grid_order() {
        let spec = parse_config(
            r#"{"gamma_b_db": [10, 20], "gamma_e_db": 0, "m": 2, "combiners": ["SC", "MRC"],
                "methods": ["asymptotic", "exact"], "mc": {"workers": 3}}"#,
        )
        .unwrap();
        let rows = run_sweep(&spec).unwrap();
        let keys: Vec<_> = rows.iter().map(|p| (p.gamma_b_db, p.combiner, p.method)).collect();
        assert_eq!(
            keys,
            vec![
                (10.0, CombinerKind::Sc, Method::Asymptotic),
                (10.0, CombinerKind::Sc, Method::Exact),
                (10.0, CombinerKind::Mrc, Method::Asymptotic),
                (10.0, CombinerKind::Mrc, Method::Exact),
                (20.0, CombinerKind::Sc, Method::Asymptotic),
                (20.0, CombinerKind::Sc, Method::Exact),
                (20.0, CombinerKind::Mrc, Method::Asymptotic),
                (20.0, CombinerKind::Mrc, Method::Exact),
            ]
        );
    }

    #[test]
    fn csv_layout() {
        let p = CurvePoint {
            gamma_b_db: 12.5,
            lambda_e: None,
            combiner: CombinerKind::Egc,
            tas_mode: TasMode::Simo,
            method: Method::MonteCarlo,
            sop: 0.0123456789123,
            ci: Some((0.01, 0.015)),
            regime_flag: "",
        };
        let csv = to_csv(std::slice::from_ref(&p));
        assert_eq!(
            csv,
            "gamma_b_db,combiner,tas_mode,method,sop,ci_low,ci_high,regime_flag\n\
             12.5,EGC,simo,montecarlo,1.23456789e-2,1.00000000e-2,1.50000000e-2,\n"
        );
        let q = CurvePoint { lambda_e: Some(0.3), method: Method::Asymptotic, ci: None, regime_flag: OUTSIDE_REGIME, ..p };
        assert!(to_csv(&[q]).ends_with("asymptotic,1.23456789e-2,,,outside-asymptotic-regime,0.3\n"));
    }

    #[test]
    fn infeasible_points_are_flagged() {
        let spec = parse_config(
            r#"{"gamma_b_db": [0, 30], "gamma_e_db": 10, "m": 2, "combiners": ["SC"],
                "methods": ["asymptotic"],
                "correlation": {"fully_correlated_main": true, "fully_correlated_eve": true}}"#,
        )
        .unwrap();
        let rows = run_sweep(&spec).unwrap();
        assert_eq!((rows[0].sop, rows[0].regime_flag), (1.0, INFEASIBLE));
        assert_eq!(rows[1].regime_flag, "");
        assert!(rows[1].sop < 0.1);
    }
}
