//! Gauss-Laguerre and Gauss-Legendre rules with per-size caching.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use nalgebra::{DMatrix, SymmetricEigen};

use super::Precision;
use crate::error::{domain, Error, Result};


/// Nodes and weights of an `n`-point Gauss-Laguerre rule.
///
/// `weights` already include the `e^{x}` factor, so `sum w_i f(x_i)`
/// approximates `int_0^inf f(x) dx` directly.
#[derive(Debug, Clone)]
pub struct LaguerreRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Natural logs of the classical weights (without `e^{x}`).
    pub ln_weights: Vec<f64>,
}

static LAGUERRE: LazyLock<Mutex<HashMap<usize, Arc<LaguerreRule>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));
static LEGENDRE: LazyLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Returns the cached `n`-point Gauss-Laguerre rule, building it on first use.
pub fn gauss_laguerre(n: usize) -> Arc<LaguerreRule> {
    assert!(n >= 1, "a quadrature rule needs at least one node");
    if let Some(rule) = LAGUERRE.lock().unwrap().get(&n) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(build_laguerre(n));
    LAGUERRE.lock().unwrap().entry(n).or_insert(rule).clone()
}

fn build_laguerre(n: usize) -> LaguerreRule {
    // Golub-Welsch: eigenvalues of the Jacobi matrix, then a Newton polish.
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            (2 * i + 1) as f64
        } else if i.abs_diff(j) == 1 {
            i.max(j) as f64
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let nf = n as f64;
    let mut ln_weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        *x = x.max(f64::MIN_POSITIVE);
        for _ in 0..4 {
            let (l_prev, l_n, _, _) = laguerre_scaled(n, *x);
            let step = *x * l_n / (nf * (l_n - l_prev));
            *x -= step;
            if step.abs() <= 4.0 * f64::EPSILON * *x {
                break;
            }
        }
        let (_, _, l_next, ln_scale) = laguerre_scaled(n, *x);
        ln_weights.push(x.ln() - 2.0 * (nf + 1.0).ln() - 2.0 * (l_next.abs().ln() + ln_scale));
    }
    let weights = nodes
        .iter()
        .zip(&ln_weights)
        .map(|(x, lw)| (lw + x).exp())
        .collect();
    LaguerreRule {
        nodes,
        weights,
        ln_weights,
    }
}

// (L_{n-1}, L_n, L_{n+1}) sharing one scale factor e^{ln_scale}.
fn laguerre_scaled(n: usize, x: f64) -> (f64, f64, f64, f64) {
    const BIG: f64 = 1e150;
    let mut ln_scale = 0.0;
    let mut prev = 1.0;
    let mut cur = 1.0 - x;
    let mut prev2 = 0.0;
    for k in 1..=n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev2 = prev;
        prev = cur;
        cur = next;
        if cur.abs() > BIG {
            prev2 /= BIG;
            prev /= BIG;
            cur /= BIG;
            ln_scale += BIG.ln();
        }
    }
    // After the loop: prev = L_n, cur = L_{n+1}, prev2 = L_{n-1}.
    (prev2, prev, cur, ln_scale)
}

/// Integrates `f` over `[0, inf)` with Gauss-Laguerre rules of doubling size.
///
/// The integrand is evaluated as is; callers fold any decaying factor into
/// `f`. Sizes run 8, 16, ... and end at exactly `prec.quad_nodes`; the
/// estimate is accepted once two successive sizes agree.
pub fn quad_semi_infinite(mut f: impl FnMut(f64) -> f64, prec: &Precision) -> Result<f64> {
    try_quad_semi_infinite(|x| Ok(f(x)), prec)
}

/// Like [`quad_semi_infinite`] for integrands that can fail.
pub fn try_quad_semi_infinite(
    mut f: impl FnMut(f64) -> Result<f64>,
    prec: &Precision,
) -> Result<f64> {
    prec.validate()?;
    let mut sizes = Vec::new();
    let mut n = 8;
    while n < prec.quad_nodes {
        sizes.push(n);
        n *= 2;
    }
    if sizes.is_empty() {
        sizes.push(prec.quad_nodes / 2);
    }
    sizes.push(prec.quad_nodes);
    let mut last: Option<f64> = None;
    for &n in &sizes {
        let rule = gauss_laguerre(n);
        let mut sum = 0.0;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let v = f(x)?;
            if v != 0.0 {
                sum += w * v;
            }
        }
        if !sum.is_finite() {
            return domain("integrand produced a non-finite value");
        }
        if let Some(prev) = last {
            if prec.converged(sum - prev, sum) {
                return Ok(sum);
            }
        }
        last = Some(sum);
    }
    Err(Error::NonConvergence {
        routine: "quad_semi_infinite",
        iterations: prec.quad_nodes,
    })
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    assert!(n >= 1, "a quadrature rule needs at least one node");
    if let Some(rule) = LEGENDRE.lock().unwrap().get(&n) {
        return Arc::clone(rule);
    }
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p_n = if n == 1 { x } else { p1 };
            let p_nm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * p_n - p_nm1) / (x * x - 1.0);
            let step = p_n / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    let rule = Arc::new((nodes, weights));
    LEGENDRE.lock().unwrap().entry(n).or_insert(rule).clone()
}

/// `int_a^b f(x) dx` with a fixed `n`-point Gauss-Legendre rule.
pub fn quad_finite(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let rule = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    rule.0
        .iter()
        .zip(&rule.1)
        .map(|(&x, &w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

// 10-point Gauss-Legendre on [a, b].
fn legendre_panel(f: &mut impl FnMut(f64) -> Result<f64>, a: f64, b: f64) -> Result<f64> {
    let rule = gauss_legendre(10);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let mut sum = 0.0;
    for (&x, &w) in rule.0.iter().zip(&rule.1) {
        sum += w * f(mid + half * x)?;
    }
    Ok(sum * half)
}

struct Panel {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    err: f64,
}

fn split_panel(f: &mut impl FnMut(f64) -> Result<f64>, a: f64, b: f64, whole: f64) -> Result<Panel> {
    let m = 0.5 * (a + b);
    let left = legendre_panel(f, a, m)?;
    let right = legendre_panel(f, m, b)?;
    let err = if m <= a || m >= b { 0.0 } else { (left + right - whole).abs() };
    Ok(Panel { a, b, left, right, err })
}

/// `int_a^b f(x) dx` by adaptive Gauss-Legendre: the panel whose rule and
/// two half-rules disagree most is bisected until the summed disagreement
/// meets the tolerance. Copes with steep steps that defeat fixed rules.
/// At most `max_terms` panels.
pub fn try_quad_adaptive(
    mut f: impl FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    prec: &Precision,
) -> Result<f64> {
    prec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return domain("adaptive quadrature needs finite limits");
    }
    const START: usize = 4;
    let width = (b - a) / START as f64;
    let mut panels = Vec::with_capacity(64);
    for i in 0..START {
        let (lo, hi) = (a + i as f64 * width, if i + 1 == START { b } else { a + (i + 1) as f64 * width });
        let whole = legendre_panel(&mut f, lo, hi)?;
        panels.push(split_panel(&mut f, lo, hi, whole)?);
    }
    while panels.len() <= prec.max_terms {
        let total: f64 = panels.iter().map(|p| p.left + p.right).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        if !total.is_finite() {
            return domain("integrand produced a non-finite value");
        }
        if prec.converged(err, total) {
            return Ok(total);
        }
        let worst = (0..panels.len())
            .max_by(|&i, &j| panels[i].err.total_cmp(&panels[j].err))
            .expect("panel list is never empty");
        let p = panels.swap_remove(worst);
        let m = 0.5 * (p.a + p.b);
        panels.push(split_panel(&mut f, p.a, m, p.left)?);
        panels.push(split_panel(&mut f, m, p.b, p.right)?);
    }
    Err(Error::NonConvergence {
        routine: "quad_adaptive",
        iterations: prec.max_terms,
    })
}

/// `int_0^inf f(x) dx` through `x = s / (1 - s)` and [`try_quad_adaptive`]
/// on `s` in `[0, 1]`. `f` must decay fast enough that `f(x) (1 + x)^2 -> 0`.
pub fn try_quad_adaptive_semi_infinite(
    mut f: impl FnMut(f64) -> Result<f64>,
    prec: &Precision,
) -> Result<f64> {
    try_quad_adaptive(
        |s| {
            let q = 1.0 - s;
            let v = f(s / q)?;
            Ok(if v == 0.0 { 0.0 } else { v / (q * q) })
        },
        0.0,
        1.0,
        prec,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_rule_is_exact_on_polynomials() {
        for n in [1usize, 5, 40] {
            let rule = gauss_laguerre(n);
            for k in 0..(2 * n).min(30) {
                // int x^k e^-x = k!
                let got: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.ln_weights)
                    .map(|(x, lw)| lw.exp() * x.powi(k as i32))
                    .sum();
                let want = crate::specfun::factorial(k as u32);
                assert!((got / want - 1.0).abs() < 1e-11, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn adaptive_rule_resolves_steps() {
        let p = Precision::default();
        // Logistic step at 3.7 with scale h against e^{-x}: e^{-3.7} pi h / sin(pi h).
        let h = 5e-5;
        let step = |x: f64| 0.5 * (1.0 + ((x - 3.7) / (2.0 * h)).tanh());
        let got = try_quad_adaptive_semi_infinite(|x| Ok(step(x) * (-x).exp()), &p).unwrap();
        let want = (-3.7f64).exp() * std::f64::consts::PI * h / (std::f64::consts::PI * h).sin();
        assert!((got / want - 1.0).abs() < 1e-12, "{got}");
        let poly = try_quad_adaptive(|x| Ok(x * x), 0.0, 3.0, &p).unwrap();
        assert!((poly - 9.0).abs() < 1e-13);
        let tight = Precision { max_terms: 3, ..p };
        assert!(try_quad_adaptive(|x| Ok(step(x)), 0.0, 10.0, &tight).is_err());
    }

    #[test]
    fn large_rules_stay_finite() {
        let rule = gauss_laguerre(512);
        let total: f64 = rule.ln_weights.iter().map(|w| w.exp()).sum();
        assert!((total - 1.0).abs() < 1e-10);
        assert!(rule.weights.iter().all(|w| w.is_finite() && *w > 0.0));
    }

    #[test]
    fn semi_infinite_matches_closed_form() {
        let prec = Precision::default();
        let v = quad_semi_infinite(|x| (-x).exp() * x.cos(), &prec).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        let v = quad_semi_infinite(|x| x * x * (-2.0 * x).exp(), &prec).unwrap();
        assert!((v - 0.25).abs() < 1e-14);
    }

    #[test]
    fn tiny_budget_reports_nonconvergence() {
        let prec = Precision {
            quad_nodes: 16,
            ..Precision::default()
        };
        let r = quad_semi_infinite(|x| (-x).exp() / (1.0 + x).powf(0.5) * (3.0 * x).sin().abs(), &prec);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn legendre_integrates_polynomials() {
        let v = quad_finite(|x| x.powi(7) + 3.0 * x * x, 0.0, 2.0, 4);
        assert!((v - (256.0 / 8.0 + 8.0)).abs() < 1e-12);
    }
}
