use proptest::prelude::*;
use wiretap_core::specfun::{
    bessel_i_scaled, hyp1f1, hyp2f1, ln_factorial, marcum_p, marcum_q, quad_semi_infinite,
};
use wiretap_core::Precision;

fn prec() -> Precision {
    Precision::default()
}

// e^{-z} I_nu(z) from the positive power series, summed with scaled terms.
// Independent of the library; fine for z up to a few hundred.
fn oracle_ie(nu: u32, z: f64) -> f64 {
    if z == 0.0 {
        return if nu == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * z;
    let mut ln0 = -z;
    for j in 1..=nu {
        ln0 += half.ln() - (j as f64).ln();
    }
    let mut term = ln0.exp();
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= half * half / (k * (k + nu as f64));
        sum += term;
        if k > half && term < 1e-18 * sum {
            return sum;
        }
        k += 1.0;
    }
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    // Split into panels so narrow peaks are not skipped by the first estimate.
    let panels = 64;
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
            simpson(f, lo, hi, fa, fm, fb, whole, tol / panels as f64, 40)
        })
        .sum()
}

// Q_M(a, b) = int_b^inf x (x/a)^{M-1} e^{-(x^2+a^2)/2} I_{M-1}(a x) dx
fn oracle_marcum_q(m: u32, a: f64, b: f64) -> f64 {
    let integrand = move |x: f64| -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        if a == 0.0 {
            let ln = (2 * m - 1) as f64 * x.ln() - 0.5 * x * x - (m - 1) as f64 * 2f64.ln() - ln_factorial(m - 1);
            return ln.exp();
        }
        let ie = oracle_ie(m - 1, a * x);
        if ie == 0.0 {
            return 0.0;
        }
        let ln = x.ln() + (m - 1) as f64 * (x / a).ln() - 0.5 * (x - a) * (x - a) + ie.ln();
        ln.exp()
    };
    let top = a.max(b) + 40.0 + 4.0 * (m as f64).sqrt();
    adaptive(&integrand, b, top, 1e-14)
}

#[test]
fn marcum_q_matches_defining_integral() {
    let cases = [
        (1, 0.5, 2.0),
        (2, 1.0, 1.0),
        (3, 4.0, 2.5),
        (5, 10.0, 12.0),
        (4, 6.0, 9.0),
        (1, 3.0, 1e-3),
        (2, 0.0, 1.7),
        (6, 2.0, 0.4),
    ];
    for (m, a, b) in cases {
        let want = oracle_marcum_q(m, a, b);
        let got = marcum_q(m, a, b, &prec()).unwrap();
        let tol = 1e-12 + 1e-9 * want;
        assert!((got - want).abs() <= tol, "Q_{m}({a}, {b}) = {got}, oracle {want}");
    }
}

#[test]
fn marcum_q_frozen_value() {
    // Defining-integral oracle, recorded to 19 digits.
    let q = marcum_q(2, 1.0, 1.0, &prec()).unwrap();
    assert!((q - 0.9407902191465286671).abs() < 1e-13);
}

#[test]
fn marcum_q_trivial_values() {
    assert_eq!(marcum_q(3, 2.5, 0.0, &prec()).unwrap(), 1.0);
    let q = marcum_q(1, 0.0, (2.0 * 2f64.ln()).sqrt(), &prec()).unwrap();
    assert!((q - 0.5).abs() < 1e-14);
}

#[test]
fn marcum_q_small_b_expansion() {
    for m in 1..=4u32 {
        for a in [0.0f64, 0.5, 2.0, 5.0] {
            for b in [1e-3f64, 5e-4, 1e-4] {
                let approx_p = b.powi(2 * m as i32) / (2f64.powi(m as i32) * ln_factorial(m).exp()) * (-a * a / 2.0).exp();
                let q = marcum_q(m, a, b, &prec()).unwrap();
                assert!((q - (1.0 - approx_p)).abs() < 1e-6);
                let p = marcum_p(m, a, b, &prec()).unwrap();
                assert!((p / approx_p - 1.0).abs() < 1e-4, "m={m} a={a} b={b}: {p} vs {approx_p}");
            }
        }
    }
}

#[test]
fn marcum_q_rejects_bad_input() {
    assert!(marcum_q(0, 1.0, 1.0, &prec()).is_err());
    assert!(marcum_q(1, -1.0, 1.0, &prec()).is_err());
    assert!(marcum_q(1, 1.0, f64::NAN, &prec()).is_err());
}

#[test]
fn bessel_matches_series_oracle() {
    for nu in [0u32, 1, 2, 5, 12] {
        for x in [1e-3, 0.3, 1.0, 4.0, 10.0, 24.0, 40.0, 90.0, 300.0] {
            let want = oracle_ie(nu, x);
            let got = bessel_i_scaled(nu, x, &prec()).unwrap();
            assert!((got / want - 1.0).abs() < 1e-10, "Ie_{nu}({x}) = {got}, oracle {want}");
        }
    }
    assert_eq!(bessel_i_scaled(0, 0.0, &prec()).unwrap(), 1.0);
    assert_eq!(bessel_i_scaled(3, 0.0, &prec()).unwrap(), 0.0);
    assert!((bessel_i_scaled(0, 10.0, &prec()).unwrap() - 0.1278333371634286073).abs() < 1e-15);
}

#[test]
fn hypergeometric_examples() {
    let p = prec();
    assert!((hyp1f1(1.0, 1.0, 2.0, &p).unwrap() / 2f64.exp() - 1.0).abs() < 1e-13);
    assert_eq!(hyp1f1(0.0, 5.0, 7.0, &p).unwrap(), 1.0);
    assert!((hyp1f1(1.0, 3.0, 0.8, &p).unwrap() - 1.329815401538961264).abs() < 1e-13);
    assert!((hyp2f1(-3.0, 1.0, 1.0, -2.0, &p).unwrap() - 27.0).abs() < 1e-12);
    assert_eq!(hyp2f1(1.5, 2.0, 4.0, 0.0, &p).unwrap(), 1.0);
    assert!((hyp2f1(1.0, 5.0, 2.0, 0.4, &p).unwrap() - 4.197530864197530864).abs() < 1e-13);
    assert!(hyp2f1(1.0, 2.0, 3.0, 1.0, &p).is_err());
    assert!(hyp1f1(1.0, -2.0, 0.5, &p).is_err());
}

#[test]
fn hyp2f1_binomial_identity() {
    let p = prec();
    for n in 0..=20u32 {
        for i in 0..=40 {
            let z = 0.25 * i as f64;
            let got = hyp2f1(-(n as f64), 1.0, 1.0, -z, &p).unwrap();
            let want = (1.0 + z).powi(n as i32);
            assert!((got / want - 1.0).abs() < 1e-12, "n={n} z={z}");
        }
    }
}

#[test]
fn quadrature_examples() {
    let p = prec();
    assert!((quad_semi_infinite(|t| (-t).exp(), &p).unwrap() - 1.0).abs() < 1e-12);
    assert!((quad_semi_infinite(|t| t * (-t).exp(), &p).unwrap() - 1.0).abs() < 1e-12);
    // e^{-2t} I_0(2 sqrt(3t)) integrates to e^{3/2} / 2.
    let f = |t: f64| {
        let x = 2.0 * (3.0 * t).sqrt();
        bessel_i_scaled(0, x, &p).unwrap() * (x - 2.0 * t).exp()
    };
    let got = quad_semi_infinite(f, &p).unwrap();
    assert!((got / (0.5 * 1.5f64.exp()) - 1.0).abs() < 1e-10, "{got}");
}

#[test]
fn quadrature_reproduces_gamma() {
    let p = prec();
    for k in 1..=10u32 {
        let got = quad_semi_infinite(|t| t.powi(k as i32 - 1) * (-t).exp(), &p).unwrap();
        let want = ln_factorial(k - 1).exp();
        assert!((got / want - 1.0).abs() < 1e-10, "Gamma({k})");
    }
}

proptest! {
    #[test]
    fn marcum_q_nonincreasing_in_b(m in 1u32..7, a in 0.0f64..20.0, b in 0.0f64..25.0, db in 0.0f64..3.0) {
        let p = prec();
        let q1 = marcum_q(m, a, b, &p).unwrap();
        let q2 = marcum_q(m, a, b + db, &p).unwrap();
        prop_assert!(q2 <= q1 + 1e-12);
        prop_assert!((0.0..=1.0).contains(&q1));
    }

    #[test]
    fn marcum_q_nondecreasing_in_a(m in 1u32..7, a in 0.0f64..20.0, da in 0.0f64..3.0, b in 0.0f64..25.0) {
        let p = prec();
        let q1 = marcum_q(m, a, b, &p).unwrap();
        let q2 = marcum_q(m, a + da, b, &p).unwrap();
        prop_assert!(q2 + 1e-12 >= q1);
    }

    #[test]
    fn scaled_bessel_zero_is_in_unit_interval_and_decreasing(x in 0.0f64..500.0, dx in 1e-3f64..50.0) {
        let p = prec();
        let v1 = bessel_i_scaled(0, x, &p).unwrap();
        let v2 = bessel_i_scaled(0, x + dx, &p).unwrap();
        prop_assert!(v1 > 0.0 && v1 <= 1.0);
        prop_assert!(v2 < v1);
    }
}
