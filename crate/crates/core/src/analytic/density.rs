//! Conditional and joint densities behind the closed forms.

use super::ConditionedState;
use crate::chanmodel::{DerivedFactors, SystemConfig};
use crate::error::{domain, Result};
use crate::specfun::{bessel_i_scaled, gamma_p, hyp1f1, ln_factorial, ln_gamma, Precision};

// a ln x with 0 ln 0 = 0.
fn xlogy(a: f64, x: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * x.ln()
    }
}

fn check_x(x: f64) -> Result<()> {
    if !(x >= 0.0) {
        return domain(format!("density argument must be >= 0, got {x}"));
    }
    Ok(())
}

/// Small-`x` density of the MRC output given `T = t`:
/// `e^{-S t} x^{M-1} / (prod(1 - eta^2) Gamma(M) gB^M)`.
pub fn pdf_conditional_mrc_asym(
    x: f64,
    state: ConditionedState,
    cfg: &SystemConfig,
    factors: &DerivedFactors,
) -> Result<f64> {
    check_x(x)?;
    let m = cfg.m;
    let ln = -factors.s * state.t + xlogy(m as f64 - 1.0, x)
        - factors.prod_private.ln()
        - ln_factorial(m - 1)
        - m as f64 * cfg.gamma_b.ln();
    Ok(ln.exp())
}

/// Small-`x` density of the EGC output given `T = t`:
/// `(2M)^M e^{-S t} x^{M-1} / (2 Gamma(2M) gB^M prod(1 - eta^2))`.
pub fn pdf_conditional_egc_asym(
    x: f64,
    state: ConditionedState,
    cfg: &SystemConfig,
    factors: &DerivedFactors,
) -> Result<f64> {
    check_x(x)?;
    let m = cfg.m as f64;
    let ln = m * (2.0 * m).ln() - factors.s * state.t + xlogy(m - 1.0, x)
        - 2f64.ln()
        - ln_gamma(2.0 * m)
        - m * cfg.gamma_b.ln()
        - factors.prod_private.ln();
    Ok(ln.exp())
}

/// Exact density of the eavesdropper MRC output given `T = t`.
///
/// `y / (gE (1 - l^2))` is a scaled noncentral chi-square with `2 N_E`
/// degrees of freedom and noncentrality `2 N_E l^2 t / (1 - l^2)`.
pub fn pdf_conditional_eve(y: f64, t: f64, cfg: &SystemConfig, lambda_e: f64, prec: &Precision) -> Result<f64> {
    check_x(y)?;
    if !(lambda_e.abs() < 1.0) {
        return domain("eavesdropper density needs |lambda_e| < 1");
    }
    let theta = cfg.gamma_e * (1.0 - lambda_e * lambda_e);
    let s = cfg.n_e as f64 * lambda_e * lambda_e / (1.0 - lambda_e * lambda_e) * t;
    Ok(noncentral_unit_density(y / theta, s, cfg.n_e, prec)? / theta)
}

/// Density of `U = sum_k |V_k + mu_k|^2` with `V_k ~ CN(0, 1)`, `n` terms and
/// `sum |mu_k|^2 = s`: `(u/s)^{(n-1)/2} e^{-(u+s)} I_{n-1}(2 sqrt(s u))`.
pub(crate) fn noncentral_unit_density(u: f64, s: f64, n: u32, prec: &Precision) -> Result<f64> {
    let nu = n - 1;
    let arg = 2.0 * (s * u).sqrt();
    if arg < 1e-8 {
        // Central limit of the expression above.
        if u == 0.0 {
            return Ok(if nu == 0 { (-s).exp() } else { 0.0 });
        }
        return Ok((nu as f64 * u.ln() - u - s - ln_factorial(nu)).exp());
    }
    let ie = bessel_i_scaled(nu, arg, prec)?;
    if ie == 0.0 {
        return Ok(0.0);
    }
    let d = u.sqrt() - s.sqrt();
    let ln = 0.5 * nu as f64 * (u.ln() - s.ln()) - d * d + ie.ln();
    Ok(ln.exp())
}

// ln 1F1(1; b; w) for w >= 0. Large w goes through
// 1F1(1; b; w) = Gamma(b) e^w w^{1-b} P(b-1, w), which cannot overflow.
fn ln_hyp1f1_unit(b: f64, w: f64, prec: &Precision) -> Result<f64> {
    if w <= 30.0 || b == 1.0 {
        return if b == 1.0 { Ok(w) } else { Ok(hyp1f1(1.0, b, w, prec)?.ln()) };
    }
    Ok(ln_gamma(b) + w + (1.0 - b) * w.ln() + gamma_p(b - 1.0, w, prec)?.ln())
}

/// Joint small-`x` density of the selected legitimate SNR `x` and the
/// eavesdropper SNR `y` behind the selected antenna (selection on `x`).
pub fn joint_pdf_tas_mrc(
    x: f64,
    y: f64,
    cfg: &SystemConfig,
    factors: &DerivedFactors,
    prec: &Precision,
) -> Result<f64> {
    check_x(x)?;
    check_x(y)?;
    if !(factors.lambda_e.abs() < 1.0) {
        return domain("joint density needs |lambda_e| < 1");
    }
    let m = cfg.m;
    let n_t = cfg.n_t as f64;
    let n_e = cfg.n_e as f64;
    let k = (cfg.m * cfg.n_t) as f64;
    let l2 = factors.lambda_e * factors.lambda_e;
    let theta = cfg.gamma_e * (1.0 - l2);
    let w = n_e * l2 * y / (factors.alpha * cfg.gamma_e * (1.0 - l2) * (1.0 - l2));
    let ln_hyp = ln_hyp1f1_unit(n_e, w, prec)?;
    let ln_norm = (n_t - 1.0) * -(ln_factorial(m) + factors.det_u.ln()) + n_t.ln()
        - factors.prod_private.ln()
        - n_e * (1.0 - l2).ln()
        - ln_factorial(m - 1)
        - k * cfg.gamma_b.ln()
        - n_e * cfg.gamma_e.ln()
        - ln_gamma(n_e)
        - factors.alpha.ln();
    let ln = ln_norm + xlogy(k - 1.0, x) + xlogy(n_e - 1.0, y) - y / theta + ln_hyp;
    Ok(ln.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_hypergeometric_log_matches_series() {
        let prec = Precision::default();
        for b in [1.0, 2.0, 5.0, 17.0] {
            for w in [0.0, 3.0, 29.0, 31.0, 60.0, 200.0] {
                let direct = hyp1f1(1.0, b, w, &prec).unwrap().ln();
                let got = ln_hyp1f1_unit(b, w, &prec).unwrap();
                assert!((got - direct).abs() < 1e-11 * direct.abs().max(1.0), "b={b} w={w}");
            }
        }
        assert!(ln_hyp1f1_unit(3.0, 5e3, &prec).unwrap().is_finite());
    }
}
