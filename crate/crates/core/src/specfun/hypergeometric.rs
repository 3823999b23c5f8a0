//! Confluent and Gauss hypergeometric functions for real arguments.

use super::Precision;
use crate::error::{domain, Error, Result};

fn nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// Kummer's function `1F1(a; b; z)`.
pub fn hyp1f1(a: f64, b: f64, z: f64, prec: &Precision) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return domain("1F1 needs finite parameters");
    }
    if nonpositive_integer(b) {
        return domain(format!("1F1 undefined for b = {b}"));
    }
    if nonpositive_integer(a) {
        return Ok(terminating(|k| (a + k) / ((b + k) * (k + 1.0)) * z, -a as usize));
    }
    if z < 0.0 {
        // Kummer transformation keeps the series free of cancellation.
        let inner = hyp1f1(b - a, b, -z, prec)?;
        return Ok(z.exp() * inner);
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..prec.max_terms {
        let kf = k as f64;
        term *= (a + kf) / ((b + kf) * (kf + 1.0)) * z;
        sum += term;
        if term.abs() <= sum.abs() * f64::EPSILON * 0.5 && kf + 1.0 > z - b {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        routine: "hyp1f1 series",
        iterations: prec.max_terms,
    })
}

/// Gauss function `2F1(a, b; c; z)`.
///
/// Polynomial cases are valid for any `z`. Otherwise `|z| < 1` is required.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64, prec: &Precision) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return domain("2F1 needs finite parameters");
    }
    if nonpositive_integer(c) {
        return domain(format!("2F1 undefined for c = {c}"));
    }
    let ratio = |k: f64| (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    if nonpositive_integer(a) || nonpositive_integer(b) {
        let n = if nonpositive_integer(a) && nonpositive_integer(b) {
            (-a).min(-b)
        } else if nonpositive_integer(a) {
            -a
        } else {
            -b
        };
        return Ok(terminating(ratio, n as usize));
    }
    if z.abs() >= 1.0 {
        return domain(format!("2F1 series diverges at z = {z}"));
    }
    if nonpositive_integer(c - a) || nonpositive_integer(c - b) {
        // Euler: (1-z)^(c-a-b) 2F1(c-a, c-b; c; z) is then a polynomial.
        let (ca, cb) = (c - a, c - b);
        let n = if nonpositive_integer(ca) && nonpositive_integer(cb) {
            (-ca).min(-cb)
        } else if nonpositive_integer(ca) {
            -ca
        } else {
            -cb
        };
        let poly = terminating(|k| (ca + k) * (cb + k) / ((c + k) * (k + 1.0)) * z, n as usize);
        return Ok((1.0 - z).powf(c - a - b) * poly);
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..prec.max_terms {
        let kf = k as f64;
        term *= ratio(kf);
        sum += term;
        if term.abs() <= sum.abs() * f64::EPSILON * 0.5 && term.abs() < 1.0 {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        routine: "hyp2f1 series",
        iterations: prec.max_terms,
    })
}

// Sum of n + 1 terms with term_{k+1} = term_k * ratio(k).
fn terminating(ratio: impl Fn(f64) -> f64, n: usize) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        term *= ratio(k as f64);
        sum += term;
    }
    sum
}
