//! System configuration, correlation structure and channel sampling.
//!
//! Every receive gain is a private complex Gaussian plus a weighted copy of a
//! component shared by all antennas listening to the same transmit antenna:
//!
//! `h_m = sqrt(1 - eta_m^2) W_m + eta_m Z`, `h_e = sqrt(1 - lambda^2) V_e + lambda Z`,
//!
//! with `W`, `V`, `Z` independent CN(0, 1). The legitimate correlation matrix
//! is then `U = diag(1 - eta^2) + eta eta^T` and `T = |Z|^2 ~ Exp(1)`.

mod factors;
mod sampler;

pub use factors::{build_factors, derive_factors, main_factors, DerivedFactors, MainFactors};
pub use sampler::{
    conditional_branch_cdf, conditional_mrc_cdf, sample_channel, ChannelDraw, ChannelSampler,
};

use nalgebra::DMatrix;

use crate::error::{domain, Error, Result};

/// Antenna counts, average SNRs (linear) and the target secrecy rate.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Legitimate receive antennas.
    pub m: u32,
    /// Transmit antennas.
    pub n_t: u32,
    /// Eavesdropper antennas.
    pub n_e: u32,
    pub gamma_b: f64,
    pub gamma_e: f64,
    /// Target secrecy rate in bits per channel use.
    pub r_s: f64,
}

impl SystemConfig {
    pub fn new(m: u32, n_t: u32, n_e: u32, gamma_b: f64, gamma_e: f64, r_s: f64) -> Result<Self> {
        let cfg = SystemConfig {
            m,
            n_t,
            n_e,
            gamma_b,
            gamma_e,
            r_s,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=32).contains(&self.m) {
            return domain(format!("M must be in 1..=32, got {}", self.m));
        }
        if !(1..=8).contains(&self.n_t) {
            return domain(format!("N_t must be in 1..=8, got {}", self.n_t));
        }
        if !(1..=32).contains(&self.n_e) {
            return domain(format!("N_E must be in 1..=32, got {}", self.n_e));
        }
        if !(self.gamma_b > 0.0 && self.gamma_b.is_finite()) {
            return domain(format!("average SNR of the main link must be positive, got {}", self.gamma_b));
        }
        if !(self.gamma_e > 0.0 && self.gamma_e.is_finite()) {
            return domain(format!("average SNR of the eavesdropper must be positive, got {}", self.gamma_e));
        }
        if !(self.r_s >= 0.0 && self.r_s.is_finite()) {
            return domain(format!("secrecy rate must be non-negative, got {}", self.r_s));
        }
        Ok(())
    }

    /// `2^{R_s}`.
    pub fn rate_factor(&self) -> f64 {
        self.r_s.exp2()
    }

    /// Same configuration at a different main-link SNR.
    pub fn with_gamma_b(&self, gamma_b: f64) -> Self {
        SystemConfig {
            gamma_b,
            ..self.clone()
        }
    }
}

/// Correlation coefficients to the shared component.
///
/// `eta[m]` ties legitimate antenna `m` to it, `lambda_e` ties every
/// eavesdropper antenna to it. The flags model the `|coefficient| = 1`
/// limits, which have no private component.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSpec {
    pub eta: Vec<f64>,
    pub lambda_e: f64,
    pub fully_correlated_main: bool,
    pub fully_correlated_eve: bool,
}

impl CorrelationSpec {
    pub fn new(eta: Vec<f64>, lambda_e: f64) -> Result<Self> {
        let spec = CorrelationSpec {
            eta,
            lambda_e,
            fully_correlated_main: false,
            fully_correlated_eve: false,
        };
        spec.check_coefficients()?;
        Ok(spec)
    }

    /// Independent legitimate branches.
    pub fn independent(m: u32, lambda_e: f64) -> Result<Self> {
        Self::new(vec![0.0; m as usize], lambda_e)
    }

    /// All legitimate branches equal to the shared component.
    pub fn fully_correlated_main(m: u32, lambda_e: f64) -> Result<Self> {
        let mut spec = Self::new(vec![0.0; m as usize], lambda_e)?;
        spec.fully_correlated_main = true;
        Ok(spec)
    }

    /// Sets the eavesdropper gains equal to the shared component.
    pub fn with_fully_correlated_eve(mut self) -> Self {
        self.fully_correlated_eve = true;
        self
    }

    /// Recovers `eta` from a correlation matrix of the form
    /// `diag(1 - eta^2) + eta eta^T` (needs at least three antennas).
    pub fn from_correlation_matrix(u: &DMatrix<f64>, lambda_e: f64) -> Result<Self> {
        let m = u.nrows();
        if u.ncols() != m || m < 3 {
            return domain("correlation matrix must be square with at least 3 rows");
        }
        let mut eta = vec![0.0; m];
        for i in 0..m {
            if (0..m).all(|j| j == i || u[(i, j)] == 0.0) {
                continue;
            }
            let pair = (0..m)
                .flat_map(|j| (0..m).map(move |k| (j, k)))
                .find(|&(j, k)| j < k && j != i && k != i && u[(j, k)] != 0.0);
            let Some((j, k)) = pair else {
                return domain("coefficients cannot be identified from this matrix");
            };
            let sq = u[(i, j)] * u[(i, k)] / u[(j, k)];
            if !(0.0..1.0).contains(&sq) {
                return domain(format!("row {i} implies an invalid coefficient square {sq}"));
            }
            eta[i] = sq.sqrt();
        }
        // Fix signs against the first nonzero coefficient.
        if let Some(r) = (0..m).find(|&i| eta[i] != 0.0) {
            for i in 0..m {
                if i != r && u[(r, i)] < 0.0 {
                    eta[i] = -eta[i];
                }
            }
        }
        let spec = Self::new(eta, lambda_e)?;
        let rebuilt = spec.correlation_matrix();
        if (&rebuilt - u).amax() > 1e-6 {
            return domain("matrix is not of single-common-component form");
        }
        Ok(spec)
    }

    fn check_coefficients(&self) -> Result<()> {
        for (i, &e) in self.eta.iter().enumerate() {
            check_coefficient(e, &format!("eta[{i}]"))?;
        }
        check_coefficient(self.lambda_e, "lambda_e")
    }

    pub fn validate_for(&self, cfg: &SystemConfig) -> Result<()> {
        if self.eta.len() != cfg.m as usize {
            return domain(format!(
                "expected {} correlation coefficients, got {}",
                cfg.m,
                self.eta.len()
            ));
        }
        if !self.fully_correlated_main {
            for (i, &e) in self.eta.iter().enumerate() {
                check_coefficient(e, &format!("eta[{i}]"))?;
            }
        }
        if !self.fully_correlated_eve {
            check_coefficient(self.lambda_e, "lambda_e")?;
        }
        Ok(())
    }

    /// Coefficients actually used for sampling, with flags applied.
    pub fn effective_eta(&self) -> Vec<f64> {
        if self.fully_correlated_main {
            self.eta.iter().map(|e| if *e < 0.0 { -1.0 } else { 1.0 }).collect()
        } else {
            self.eta.clone()
        }
    }

    pub fn effective_lambda(&self) -> f64 {
        if self.fully_correlated_eve {
            if self.lambda_e < 0.0 {
                -1.0
            } else {
                1.0
            }
        } else {
            self.lambda_e
        }
    }

    /// `U` with unit diagonal and `eta_i eta_j` elsewhere.
    pub fn correlation_matrix(&self) -> DMatrix<f64> {
        correlation_matrix(&self.effective_eta())
    }
}

pub(crate) fn correlation_matrix(eta: &[f64]) -> DMatrix<f64> {
    let m = eta.len();
    DMatrix::from_fn(m, m, |i, j| if i == j { 1.0 } else { eta[i] * eta[j] })
}

fn check_coefficient(v: f64, name: &str) -> Result<()> {
    if !v.is_finite() || v.abs() > 1.0 {
        return domain(format!("{name} must lie in [-1, 1], got {v}"));
    }
    if v.abs() == 1.0 {
        return Err(Error::DegenerateCorrelation(format!(
            "{name} = {v}; use the fully-correlated flag instead"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let spec = CorrelationSpec::new(vec![0.85, 0.9, -0.95], 0.0).unwrap();
        let u = spec.correlation_matrix();
        assert!((u[(0, 1)] - 0.765).abs() < 1e-15);
        assert!((u[(0, 2)] + 0.8075).abs() < 1e-15);
        assert!((u[(1, 2)] + 0.855).abs() < 1e-15);
        let back = CorrelationSpec::from_correlation_matrix(&u, 0.0).unwrap();
        for (a, b) in back.eta.iter().zip(&spec.eta) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn unit_coefficients_need_flags() {
        assert!(matches!(
            CorrelationSpec::new(vec![1.0, 0.5], 0.0),
            Err(Error::DegenerateCorrelation(_))
        ));
        assert!(matches!(CorrelationSpec::new(vec![0.5], 1.2), Err(Error::Domain(_))));
        let spec = CorrelationSpec::fully_correlated_main(3, 0.2).unwrap();
        assert_eq!(spec.effective_eta(), vec![1.0; 3]);
    }

    #[test]
    fn config_bounds() {
        assert!(SystemConfig::new(33, 1, 1, 1.0, 1.0, 1.0).is_err());
        assert!(SystemConfig::new(2, 9, 1, 1.0, 1.0, 1.0).is_err());
        assert!(SystemConfig::new(2, 1, 1, 0.0, 1.0, 1.0).is_err());
        assert!(SystemConfig::new(2, 1, 1, 1.0, 1.0, -0.1).is_err());
        assert!(SystemConfig::new(32, 8, 32, 1.0, 1.0, 0.0).is_ok());
    }
}
