//! Generalized Marcum Q function of integer order.
//!
//! `1 - Q_M(a, b)` is the CDF of a noncentral chi-square variable with `2M`
//! degrees of freedom, i.e. a Poisson(a^2/2) mixture of gamma CDFs:
//!
//! `1 - Q_M(a, b) = sum_j w_j P(M + j, b^2/2)`, `w_j = e^{-l} l^j / j!`.
//!
//! Whichever of `P` or `Q` is the smaller tail is summed directly so both
//! results keep relative accuracy deep into their tails. The gamma terms are
//! produced by recurrences that only ever add positive quantities.

use super::gamma::{gamma_pq, ln_gamma};
use super::Precision;
use crate::error::{domain, Error, Result};

/// `Q_M(a, b)`.
pub fn marcum_q(m: u32, a: f64, b: f64, prec: &Precision) -> Result<f64> {
    marcum_pq(m, a, b, prec).map(|(_, q)| q)
}

/// `1 - Q_M(a, b)`, accurate when it is tiny.
pub fn marcum_p(m: u32, a: f64, b: f64, prec: &Precision) -> Result<f64> {
    marcum_pq(m, a, b, prec).map(|(p, _)| p)
}

/// Returns `(1 - Q_M(a, b), Q_M(a, b))`.
pub fn marcum_pq(m: u32, a: f64, b: f64, prec: &Precision) -> Result<(f64, f64)> {
    if m == 0 {
        return domain("Marcum Q order must be at least 1");
    }
    if !(a >= 0.0 && b >= 0.0) || !a.is_finite() || b.is_nan() {
        return domain(format!("Marcum Q needs finite a, b >= 0, got a={a}, b={b}"));
    }
    if b == 0.0 {
        return Ok((0.0, 1.0));
    }
    if b == f64::INFINITY {
        return Ok((1.0, 0.0));
    }
    let mf = m as f64;
    let lam = 0.5 * a * a;
    let y = 0.5 * b * b;
    if lam == 0.0 {
        return gamma_pq(mf, y, prec);
    }
    if y < lam + mf {
        let p = lower_mixture(mf, lam, y, prec)?.min(1.0);
        Ok((p, 1.0 - p))
    } else {
        let q = upper_mixture(mf, lam, y, prec)?.min(1.0);
        Ok((1.0 - q, q))
    }
}

// Last index worth visiting: the Poisson weights beyond it sum below 1e-20.
fn top_index(lam: f64) -> f64 {
    (lam + 10.0 * lam.sqrt() + 20.0).ceil()
}

fn too_many(prec: &Precision) -> Error {
    Error::NonConvergence {
        routine: "marcum_q",
        iterations: prec.max_terms,
    }
}

// sum_j w_j P(m + j, y), walking j downward so P only accumulates terms.
fn lower_mixture(m: f64, lam: f64, y: f64, prec: &Precision) -> Result<f64> {
    let jtop = top_index(lam);
    if jtop as usize > prec.max_terms {
        return Err(too_many(prec));
    }
    let ln_lam = lam.ln();
    let ln_y = y.ln();
    let j_mode = lam.floor();
    let mut p = gamma_pq(m + jtop, y, prec)?.0;
    let mut lw = -lam + jtop * ln_lam - ln_gamma(jtop + 1.0);
    // ln t_n with t_n = e^-y y^n / n!, and P(n) = P(n + 1) + t_n.
    let mut n = m + jtop - 1.0;
    let mut lt = -y + n * ln_y - ln_gamma(n + 1.0);
    let mut sum = lw.exp() * p;
    let mut prev = sum;
    let mut j = jtop;
    while j > 0.0 {
        p += lt.exp();
        lt += n.ln() - ln_y;
        n -= 1.0;
        lw += j.ln() - ln_lam;
        j -= 1.0;
        let term = lw.exp() * p;
        sum += term;
        if j < j_mode && term < prev && term <= sum * 1e-17 {
            break;
        }
        prev = term;
    }
    Ok(sum)
}

// sum_j w_j Q(m + j, y), walking j upward so Q only accumulates terms.
// Q grows with j, so deep in the tail the product peaks well past the
// Poisson mode and the walk stops on the product, not on the weights.
fn upper_mixture(m: f64, lam: f64, y: f64, prec: &Precision) -> Result<f64> {
    let jtop = top_index(lam);
    let ln_lam = lam.ln();
    let ln_y = y.ln();
    let j_mode = lam.floor();
    let mut q = gamma_pq(m, y, prec)?.1;
    let mut lw = -lam;
    // Q(n + 1) = Q(n) + t_n
    let mut n = m;
    let mut lt = -y + n * ln_y - ln_gamma(n + 1.0);
    let mut sum = lw.exp() * q;
    let mut prev = sum;
    let mut j: f64 = 0.0;
    while (j as usize) < prec.max_terms {
        q += lt.exp();
        n += 1.0;
        lt += ln_y - n.ln();
        j += 1.0;
        lw += ln_lam - j.ln();
        let term = lw.exp() * q;
        sum += term;
        if j > j_mode && term < prev && term <= sum * 1e-17 {
            return Ok(sum);
        }
        if j > jtop && sum == 0.0 {
            return Ok(0.0);
        }
        prev = term;
    }
    Err(too_many(prec))
}
