//! Exponentially scaled modified Bessel function of the first kind.

use super::gamma::ln_gamma;
use super::Precision;
use crate::error::{domain, Error, Result};

/// `e^{-x} I_nu(x)` for integer order `nu` and `x >= 0`.
///
/// Uses the power series for small and moderate arguments and the Hankel
/// asymptotic expansion once `x` dominates `nu^2`.
pub fn bessel_i_scaled(nu: u32, x: f64, prec: &Precision) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return domain(format!("scaled Bessel I needs finite x >= 0, got {x}"));
    }
    if x == 0.0 {
        return Ok(if nu == 0 { 1.0 } else { 0.0 });
    }
    let nuf = nu as f64;
    if x > 25.0 + 0.5 * nuf * nuf {
        if let Some(v) = asymptotic(nuf, x) {
            return Ok(v);
        }
    }
    series(nuf, x, prec)
}

fn series(nu: f64, x: f64, prec: &Precision) -> Result<f64> {
    let q = 0.25 * x * x;
    // First term computed in logs so neither x^nu nor e^-x overflows alone.
    let mut term = (nu * (0.5 * x).ln() - ln_gamma(nu + 1.0) - x).exp();
    let mut sum = term;
    for k in 1..=prec.max_terms {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        if term <= sum * f64::EPSILON * 0.5 {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        routine: "bessel_i_scaled series",
        iterations: prec.max_terms,
    })
}

fn asymptotic(nu: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (8.0 * k as f64 * x);
        if next.abs() >= term.abs() && next != 0.0 {
            return None;
        }
        term = next;
        sum += term;
        if term.abs() <= sum.abs() * f64::EPSILON * 0.5 {
            return Some(sum / (2.0 * std::f64::consts::PI * x).sqrt());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        let prec = Precision::default();
        let cases = [
            (0, 10.0, 0.127_833_337_163_428_607_3),
            (1, 0.5, 0.156_420_803_184_871_697_1),
            (2, 25.0, 0.073_910_684_481_893_286_66),
            (0, 100.0, 0.039_944_379_299_096_682_65),
            (5, 60.0, 0.041_836_552_458_975_642_32),
            (3, 1e-3, 2.081_251_171_397_724_697e-11),
        ];
        for (nu, x, want) in cases {
            let got = bessel_i_scaled(nu, x, &prec).unwrap();
            assert!((got / want - 1.0).abs() < 1e-13, "nu={nu} x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn branches_agree_at_switch() {
        let prec = Precision::default();
        for nu in 0..4u32 {
            let x = 25.0 + 0.5 * (nu * nu) as f64 + 1.0;
            let a = asymptotic(nu as f64, x).unwrap();
            let s = series(nu as f64, x, &prec).unwrap();
            assert!((a / s - 1.0).abs() < 1e-13);
        }
    }
}
