//! Aggregate quantities that every closed form is written in terms of.

use std::ops::Deref;

use nalgebra::DMatrix;

use super::{check_coefficient, correlation_matrix, CorrelationSpec, SystemConfig};
use crate::error::{domain, Error, Result};

/// Factors that depend only on the legitimate coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MainFactors {
    pub eta: Vec<f64>,
    pub u: DMatrix<f64>,
    /// `det U = prod(1 - eta^2) (1 + S)`.
    pub det_u: f64,
    /// `S = sum eta^2 / (1 - eta^2)`.
    pub s: f64,
    /// `prod(1 - eta^2)`.
    pub prod_private: f64,
}

impl MainFactors {
    /// `det U` by LU factorisation, independent of the closed form.
    pub fn det_direct(&self) -> f64 {
        self.u.clone().lu().determinant()
    }
}

/// Main-link factors plus the eavesdropper-dependent ones.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedFactors {
    pub main: MainFactors,
    pub lambda_e: f64,
    pub n_e: u32,
    /// `S_lambda = sum eta^2 (1 - lambda^2) / (1 - eta^2)`.
    pub s_lambda: f64,
    /// `alpha = 1 + S + N_E lambda^2 / (1 - lambda^2)`; infinite at `|lambda| = 1`.
    pub alpha: f64,
}

impl Deref for DerivedFactors {
    type Target = MainFactors;
    fn deref(&self) -> &MainFactors {
        &self.main
    }
}

impl DerivedFactors {
    /// `(1 + S_lambda) / (1 + S)`, the per-order weight of the shared component.
    pub fn weight_ratio(&self) -> f64 {
        (1.0 + self.s_lambda) / (1.0 + self.s)
    }

    /// `N_E lambda^2 / (alpha (1 - lambda^2))`, the argument of the 2F1 terms.
    pub fn z(&self) -> f64 {
        let l2 = self.lambda_e * self.lambda_e;
        if l2 == 0.0 {
            0.0
        } else {
            self.n_e as f64 * l2 / (self.alpha * (1.0 - l2))
        }
    }
}

pub fn main_factors(eta: &[f64]) -> Result<MainFactors> {
    if eta.is_empty() {
        return domain("at least one legitimate antenna is required");
    }
    let mut s = 0.0;
    let mut prod = 1.0;
    for (i, &e) in eta.iter().enumerate() {
        check_coefficient(e, &format!("eta[{i}]"))?;
        let private = 1.0 - e * e;
        s += e * e / private;
        prod *= private;
    }
    Ok(MainFactors {
        eta: eta.to_vec(),
        u: correlation_matrix(eta),
        // Never above 1; for M = 1 the product is 1 up to rounding.
        det_u: (prod * (1.0 + s)).min(1.0),
        s,
        prod_private: prod,
    })
}

/// Factors for explicit coefficients. Accepts `|lambda| = 1` (the
/// eavesdropper-limit bound), where `S_lambda = 0` and `alpha` is infinite.
pub fn derive_factors(eta: &[f64], lambda_e: f64, n_e: u32) -> Result<DerivedFactors> {
    if !(lambda_e.abs() <= 1.0) {
        return domain(format!("lambda_e must lie in [-1, 1], got {lambda_e}"));
    }
    if n_e == 0 {
        return domain("at least one eavesdropper antenna is required");
    }
    let main = main_factors(eta)?;
    let l2 = lambda_e * lambda_e;
    let s_lambda = eta
        .iter()
        .map(|e| e * e * (1.0 - l2) / (1.0 - e * e))
        .sum();
    let alpha = if l2 == 1.0 {
        f64::INFINITY
    } else {
        1.0 + main.s + n_e as f64 * l2 / (1.0 - l2)
    };
    Ok(DerivedFactors {
        main,
        lambda_e,
        n_e,
        s_lambda,
        alpha,
    })
}

/// Validated factors for a configuration. Fully correlated links have no
/// inverse correlation structure and are rejected.
pub fn build_factors(spec: &CorrelationSpec, cfg: &SystemConfig) -> Result<DerivedFactors> {
    cfg.validate()?;
    if spec.fully_correlated_main || spec.fully_correlated_eve {
        return Err(Error::DegenerateCorrelation(
            "closed forms with aggregate factors need |eta| < 1 and |lambda| < 1".into(),
        ));
    }
    spec.validate_for(cfg)?;
    derive_factors(&spec.eta, spec.lambda_e, cfg.n_e)
}
